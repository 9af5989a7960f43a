#!/usr/bin/env python3
"""Regenerates the test fixtures under tests/fixtures.

Deterministic: the same seed always yields byte-identical files.

    python3 scripts/gen_fixtures.py [--out tests/fixtures] [--seed 7]
"""

import argparse
import itertools
import json
import random
from pathlib import Path

MAIN_TOPICS = {
    "globalization": ["trade", "markets", "culture", "migration", "factories"],
    "abortion": ["clinics", "doctors", "pregnancy", "courts", "parents"],
    "gun control": ["firearms", "owners", "schools", "background checks", "hunters"],
    "death penalty": ["prisons", "courts", "sentencing", "prosecutors", "juries"],
    "minimum wage": ["workers", "employers", "restaurants", "inflation", "jobs"],
    "nuclear energy": ["reactors", "waste", "electricity", "plants", "uranium"],
    "school uniforms": ["students", "teachers", "classrooms", "clothing", "principals"],
    "affirmative action": ["universities", "admissions", "employers", "applicants", "campuses"],
    "euthanasia": ["patients", "doctors", "hospitals", "physicians", "hospices"],
    "animal testing": ["laboratories", "medicines", "scientists", "cosmetics", "mice"],
}

SECONDARY_TOPICS = {
    "climate change": ["emissions", "farmers"],
    "social media": ["platforms", "teenagers"],
    "vaccination": ["vaccines", "clinics"],
    "immigration": ["borders", "migrants"],
    "free trade": ["tariffs", "exporters"],
    "space exploration": ["rockets", "satellites"],
    "renewable energy": ["turbines", "panels"],
    "online privacy": ["browsers", "advertisers"],
    "zoos": ["keepers", "visitors"],
    "capital punishment": ["inmates", "appeals"],
}

# Noun phrases whose lexicon mass lands only in care/fairness.
INDIVIDUALIZING = [
    "the welfare of vulnerable people",
    "fairness for ordinary workers",
    "equal rights for minorities",
    "compassion toward those who suffer",
    "justice for struggling households",
    "the safety and health of patients",
    "equality of opportunity",
    "protection from abuse and cruelty",
    "dignity and equal treatment",
    "kindness and empathy in society",
    "justice and equity for everyone",
    "the wellbeing of children at risk",
]

# Only loyalty/authority/purity.
BINDING = [
    "loyalty to the nation",
    "respect for tradition and authority",
    "the sanctity of sacred values",
    "order and discipline in communities",
    "patriotism and national unity",
    "obedience to legitimate laws",
    "the purity of inherited customs",
    "duty and allegiance to the homeland",
    "decency and modesty in public life",
    "stability of traditional institutions",
    "solidarity and belonging among citizens",
    "respect for rules and hierarchy",
]

NEUTRAL = [
    "economic growth",
    "the cost of energy",
    "market efficiency",
    "technical progress",
    "productivity in industry",
    "consumer prices",
    "business investment",
    "administrative budgets",
]

MIXED = [
    "the safety of citizens under the law",
    "compassion and respect for authority",
    "fair rules and national loyalty",
    "equal rights and sacred traditions",
]

POS_VERBS = ["improves", "strengthens", "boosts", "benefits", "helps"]
NEG_VERBS = ["undermines", "damages", "weakens", "worsens", "ruins"]

CLAIM_TEMPLATES = [
    "{Topic} {v1} {m1} because it {v2} {m2} for {theme}.",
    "Many {theme} argue that {topic} {v1} {m1} and therefore {v2} {m2}.",
    "{Topic} {v1} {theme} since it {v2} {m1} and {m2}.",
    "In practice {topic} {v1} {m1}, which leads to a change that {v2} {m2}.",
]

EVIDENCE_TEMPLATES = [
    "A {year} survey of {theme} shows that {topic} {v1} {m1}.",
    "Research from {org} reports that {topic} {v1} {m1} among {theme}.",
    "Recent analyses of {theme} indicate that {topic} {v1} {m1}.",
]

NOISE_TEMPLATES = [
    "{Topic} was discussed at a {event} held in {city} in {year}.",
    "The committee on {topic} met on {weekday} to review {theme}.",
    "A new book about {topic} appeared in {city} last {month}.",
    "Journalists in {city} wrote several articles on {topic} and {theme}.",
    "The debate over {topic} continued through {month} in {city}.",
]

GENERAL_NOISE = [
    "The weather in {city} was mild during {month}.",
    "Prices rose because demand was strong in {city}.",
    "The museum in {city} opened a new wing in {year}.",
    "Local farmers in {city} reported a good harvest this {month}.",
    "The library extended its opening hours on {weekday} evenings.",
    "Traffic in {city} slowed after the bridge closed in {month}.",
    "A survey of readers in {city} covered sports and travel.",
    "Volunteers showed compassion to stranded travelers in {city}.",
    "The city council respected the tradition of the {month} parade.",
    "The orchestra played a concert in {city} on {weekday}.",
]

CITIES = ["Denver", "Leeds", "Lyon", "Osaka", "Austin", "Porto", "Graz", "Tampa", "Bergen", "Cork"]
EVENTS = ["conference", "town hall", "seminar", "forum", "workshop"]
WEEKDAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday"]
MONTHS = ["January", "March", "April", "June", "August", "October", "November"]
ORGS = ["the university", "a policy institute", "an independent group", "the ministry"]
FILLERS = ["several", "local", "regional", "older", "rural", "weekly", "distant", "minor",
           "northern", "eastern", "quiet", "modest", "seasonal"]

# Aspect -> morals for the distant-supervision fixture. Kept in sync with
# data/lexicons/aspect_map.tsv; the expected labels below are derived from
# this table, not from the C++ loader.
ASPECT_MAP = {
    "respect": {"authority"}, "obedience": {"authority"}, "discipline": {"authority"},
    "law enforcement": {"authority"}, "tradition": {"authority", "loyalty"},
    "leadership": {"authority"}, "safety": {"care"}, "health": {"care"},
    "suffering": {"care"}, "violence": {"care"}, "children": {"care"}, "victims": {"care"},
    "justice": {"fairness"}, "equality": {"fairness"}, "discrimination": {"fairness"},
    "rights": {"fairness"}, "wages": {"fairness"}, "costs": {"fairness"},
    "patriotism": {"loyalty"}, "community": {"loyalty"}, "family": {"loyalty"},
    "identity": {"loyalty"}, "nation": {"loyalty"}, "religion": {"purity"},
    "sanctity of life": {"purity"}, "nature": {"purity"}, "drugs": {"purity", "care"},
    "environment": {"purity", "care"}, "self-defense": {"care", "fairness"}, "death": {"care"},
}
UNMAPPED_ASPECTS = ["economy", "weather", "banana", "taxes", "technology", "history"]
DATASET_TOPICS = ["marijuana legalization", "gun control", "abortion", "death penalty",
                  "minimum wage", "nuclear energy", "cloning", "school uniforms"]
FOUNDATION_ORDER = ["care", "fairness", "loyalty", "authority", "purity"]

# Hand-written arguments with hand-assigned moral labels.
LEXICON_EVAL = [
    ("Hospitals must protect the most vulnerable patients. Nobody should suffer needless pain at the end of life.", ["care"]),
    ("Every applicant deserves a fair hearing. Admission rules that favor insiders are unjust and discriminatory.", ["fairness"]),
    ("Soldiers who serve the nation show loyalty that we must honor. Betraying them would divide the country.", ["loyalty"]),
    ("Teachers need the authority to keep order in class. Pupils should respect the rules set by the school.", ["authority"]),
    ("Some traditions are sacred and should not be degraded. Treating life as a commodity is disgusting.", ["purity"]),
    ("A living wage is a matter of justice. Workers who are exploited suffer real harm to their health.", ["care", "fairness"]),
    ("Our community stands together in hard times. Respect for elders and tradition keeps us united.", ["loyalty", "authority"]),
    ("Police must enforce the law fairly. Equal treatment before the law is the basis of legitimate order.", ["fairness", "authority"]),
    ("Cruelty to animals in laboratories causes immense suffering. Compassion demands better methods.", ["care"]),
    ("Nuclear waste could contaminate rivers and soil for centuries. Keeping nature pure matters more than cheap power.", ["purity"]),
    ("Patriotic citizens support national industry. Buying local goods is an act of solidarity with the homeland.", ["loyalty"]),
    ("Uniforms teach discipline and obedience. Students learn that rules and hierarchy exist for a reason.", ["authority"]),
    ("Denying women the right to choose is unfair. Forcing a pregnancy causes harm and distress.", ["care", "fairness"]),
    ("The death penalty gives victims and their families justice. It also upholds the authority of the courts.", ["fairness", "authority"]),
    ("Globalization weakens national identity and local heritage. Communities lose the customs that bind them.", ["loyalty"]),
    ("Life is sacred from conception. Ending it violates the sanctity that faith teaches.", ["purity"]),
    ("Stricter gun laws keep children safe from violence. Protecting innocent lives is our first duty.", ["care", "authority"]),
    ("Quotas can be unfair to qualified candidates. Merit and equal opportunity should decide.", ["fairness"]),
    ("Trade agreements cut tariffs and change prices. Exporters adjust their supply chains accordingly.", []),
    ("Families who lose a member to violence deserve compassion and fairness from the state.", ["care", "fairness"]),
]


def cap(s):
    return s[0].upper() + s[1:]


class Corpus:
    def __init__(self, rng):
        self.rng = rng
        self.docs = []
        self.seen = set()

    def unique(self, text):
        if text in self.seen:
            return False
        self.seen.add(text)
        return True

    def add_doc(self, title, topic, sentences):
        doc_id = "doc-%04d" % (len(self.docs) + 1)
        self.docs.append({"id": doc_id, "title": title, "text": " ".join(sentences), "topic": topic})


def fill(template, rng, **kw):
    base = {
        "city": rng.choice(CITIES), "event": rng.choice(EVENTS), "year": str(rng.randint(2005, 2021)),
        "weekday": rng.choice(WEEKDAYS), "month": rng.choice(MONTHS), "org": rng.choice(ORGS),
    }
    base.update(kw)
    if "topic" in base:
        base["Topic"] = cap(base["topic"])
    return template.format(**base)


def claims(rng, corpus, topic, themes, verbs, bank, count):
    out = []
    combos = list(itertools.product(range(len(CLAIM_TEMPLATES)), range(len(bank)), range(len(bank))))
    rng.shuffle(combos)
    k = 0
    for t, a, b in combos:
        if a == b:
            continue
        text = fill(CLAIM_TEMPLATES[t], rng, topic=topic, theme=themes[k % len(themes)],
                    v1=rng.choice(verbs), v2=rng.choice(verbs), m1=bank[a], m2=bank[b])
        if corpus.unique(text):
            out.append(text)
            k += 1
        if len(out) == count:
            break
    return out


def evidence(rng, corpus, topic, themes, verbs, bank, count):
    out = []
    k = 0
    while len(out) < count:
        t = EVIDENCE_TEMPLATES[k % len(EVIDENCE_TEMPLATES)]
        text = fill(t, rng, topic=topic, theme=themes[k % len(themes)], v1=rng.choice(verbs),
                    m1=rng.choice(bank))
        k += 1
        if corpus.unique(text):
            out.append(text)
    return out


def noise(rng, corpus, topic, themes, count):
    out = []
    while len(out) < count:
        text = fill(rng.choice(NOISE_TEMPLATES), rng, topic=topic, theme=rng.choice(themes))
        if corpus.unique(text):
            out.append(text)
    return out


def boundary_sentences(topic):
    """Causality marker exactly 11 and 12 tokens from the nearest topic token,
    on both sides, with and without a sentiment marker; plus length cases."""
    t = cap(topic)
    ntopic = len(topic.split())
    out = []
    for dist in (11, 12):
        gap = FILLERS[: dist - 1]
        out.append(f"{t} {' '.join(gap)} because costs rose sharply.")
        out.append(f"Because {' '.join(gap)} {topic} was debated again in town.")
        gap_s = ["good"] + FILLERS[: dist - 2]
        out.append(f"{t} {' '.join(gap_s)} because voters changed their minds.")
    # Lengths 5, 6, 60 and 61 tokens.
    for n in (5, 6, 60, 61):
        words = [w for w in (FILLERS * 6)][: n - ntopic]
        out.append(f"{t} {' '.join(words)}.")
    return out


def build_corpus(rng):
    corpus = Corpus(rng)
    for topic, themes in MAIN_TOPICS.items():
        for stance, verbs in (("pro", POS_VERBS), ("con", NEG_VERBS)):
            parts = []
            parts += claims(rng, corpus, topic, themes, verbs, INDIVIDUALIZING, 6)
            parts += claims(rng, corpus, topic, themes, verbs, BINDING, 6)
            parts += claims(rng, corpus, topic, themes, verbs, NEUTRAL, 4)
            parts += claims(rng, corpus, topic, themes, verbs, MIXED, 2)
            parts += evidence(rng, corpus, topic, themes, verbs, INDIVIDUALIZING, 3)
            parts += evidence(rng, corpus, topic, themes, verbs, BINDING, 3)
            parts += evidence(rng, corpus, topic, themes, verbs, NEUTRAL, 2)
            rng.shuffle(parts)
            for i in range(0, len(parts), 9):
                corpus.add_doc(f"{cap(topic)} ({stance}) {i // 9 + 1}", topic, parts[i:i + 9])
        filler = noise(rng, corpus, topic, themes, 14)
        corpus.add_doc(f"{cap(topic)} news", topic, filler[:7])
        corpus.add_doc(f"{cap(topic)} notes", topic, filler[7:])
        corpus.add_doc(f"{cap(topic)} edge cases", topic, boundary_sentences(topic))

    for topic, themes in SECONDARY_TOPICS.items():
        parts = noise(rng, corpus, topic, themes, 10)
        bank = rng.choice([INDIVIDUALIZING, BINDING, NEUTRAL])
        parts += claims(rng, corpus, topic, themes, rng.choice([POS_VERBS, NEG_VERBS]), bank, 4)
        parts += evidence(rng, corpus, topic, themes, POS_VERBS, NEUTRAL, 2)
        parts += boundary_sentences(topic)
        rng.shuffle(parts)
        corpus.add_doc(f"{cap(topic)} digest", topic, parts)

    general = []
    while len(general) < 400:
        text = fill(rng.choice(GENERAL_NOISE), rng)
        if text not in general:
            general.append(text)
        elif len(general) > 300:
            # Small template space; pad with numbered variants.
            general.append(text[:-1] + f" in week {len(general)}.")
    for i in range(0, len(general), 20):
        corpus.add_doc(f"Miscellany {i // 20 + 1}", None, general[i:i + 20])
    return corpus.docs


def build_aspect_corpus(rng):
    aspects = sorted(ASPECT_MAP)
    records = []
    for i in range(500):
        topic = DATASET_TOPICS[i % len(DATASET_TOPICS)]
        if i % 10 == 9:
            chosen = rng.sample(UNMAPPED_ASPECTS, 2)
        else:
            chosen = rng.sample(aspects, rng.choice([1, 1, 2, 3]))
            if rng.random() < 0.3:
                chosen.append(rng.choice(UNMAPPED_ASPECTS))
        morals = set()
        for a in chosen:
            morals |= ASPECT_MAP.get(a, set())
        text = f"Argument {i} on {topic} mentions " + ", ".join(chosen) + "."
        display_topic = topic.title() if i % 3 == 0 else topic
        records.append({
            "text": text,
            "topic": display_topic,
            "aspects": chosen,
            "expected_morals": [f for f in FOUNDATION_ORDER if f in morals],
        })
    return records


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests" / "fixtures"))
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    docs = build_corpus(rng)
    with open(out / "corpus.jsonl", "w") as f:
        for d in docs:
            rec = {k: v for k, v in d.items() if v is not None}
            f.write(json.dumps(rec) + "\n")
    (out / "topics.txt").write_text("\n".join(MAIN_TOPICS) + "\n")
    (out / "retrieval_topics.txt").write_text("\n".join(list(MAIN_TOPICS) + list(SECONDARY_TOPICS)) + "\n")

    with open(out / "aspect_corpus.jsonl", "w") as f:
        for r in build_aspect_corpus(rng):
            f.write(json.dumps(r) + "\n")

    with open(out / "lexicon_eval.jsonl", "w") as f:
        for text, morals in LEXICON_EVAL:
            f.write(json.dumps({"text": text, "morals": morals}) + "\n")


if __name__ == "__main__":
    main()
