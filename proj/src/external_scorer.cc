#include <cmath>

#include "httplib.h"
#include "moral_debater/json_io.h"
#include "moral_debater/scorer.h"

namespace moral_debater {

ExternalScorer::ExternalScorer(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {
  const auto scheme = endpoint_.find("://");
  if (scheme == std::string::npos || endpoint_.substr(0, scheme) != "http") {
    throw ValidationError("scorer endpoint must start with http://: " + endpoint_);
  }
  const auto slash = endpoint_.find('/', scheme + 3);
  if (slash == std::string::npos) {
    base_ = endpoint_;
    path_ = "/";
  } else {
    base_ = endpoint_.substr(0, slash);
    path_ = endpoint_.substr(slash);
  }
}

MoralProfile ExternalScorer::score(const Sentence& sentence) const {
  return score_text(sentence.text);
}

MoralProfile ExternalScorer::score_text(std::string_view text) const {
  httplib::Client client(base_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const Json request = {{"text", text}};
  auto res = client.Post(path_, request.dump(), "application/json");
  if (!res) {
    throw TransportError("scorer " + endpoint_ + " unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("scorer " + endpoint_ + " returned HTTP " + std::to_string(res->status));
  }
  Json body;
  try {
    body = Json::parse(res->body);
  } catch (const Json::parse_error& e) {
    throw ProtocolError(std::string("scorer response is not JSON: ") + e.what());
  }
  if (!body.is_object()) throw ProtocolError("scorer response is not an object");
  std::array<double, kFoundationCount> scores{};
  for (auto f : kAllFoundations) {
    const auto key = std::string(to_string(f));
    if (!body.contains(key) || !body.at(key).is_number()) {
      throw ProtocolError("scorer response lacks numeric '" + key + "'");
    }
    const double v = body.at(key).get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ProtocolError("scorer returned " + key + "=" + body.at(key).dump() +
                          ", outside [0,1]");
    }
    scores[index_of(f)] = v;
  }
  return MoralProfile(scores);
}

}  // namespace moral_debater
