#pragma once

// nlohmann/json conversions for types shared across modules.

#include "json.hpp"
#include "moral_debater/corpus.h"
#include "moral_debater/foundation.h"

namespace moral_debater {

using Json = nlohmann::json;

void to_json(Json& j, const PipelineConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const Json& j, PipelineConfig& c);

void to_json(Json& j, MoralSet s);
void from_json(const Json& j, MoralSet& s);

void to_json(Json& j, const MoralProfile& p);
void from_json(const Json& j, MoralProfile& p);

void to_json(Json& j, const Sentence& s);
void from_json(const Json& j, Sentence& s);

}  // namespace moral_debater
