#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "moral_debater/pipeline.h"
#include "moral_debater/study.h"

namespace moral_debater {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// JSON API over the generator and the study store. Either may be absent,
// in which case its endpoints answer 503.
class Service {
 public:
  Service(std::shared_ptr<const Generator> generator, std::shared_ptr<StudyStore> study);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Transport-independent routing; errors map to 400 (validation), 404
  // (unknown session or route), 409 (state) and 422 (insufficient material).
  ApiResponse dispatch(std::string_view method, std::string_view path,
                       std::string_view body) const;

  // Binds and serves on a background thread. Port 0 picks a free port; the
  // bound port is returned. Files under `static_dir` are served at "/".
  int start(const std::string& host, int port,
            const std::optional<std::filesystem::path>& static_dir = std::nullopt);
  void wait();
  void stop();

 private:
  struct Server;
  std::shared_ptr<const Generator> generator_;
  std::shared_ptr<StudyStore> study_;
  std::unique_ptr<Server> server_;
};

}  // namespace moral_debater
