#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "json.hpp"

namespace oddterw {

enum class Status { pass, fail, skipped };

std::string to_string(Status s);

// Outcome of one verification check. A failing report always carries at
// least one witness describing where the check broke.
struct VerificationReport {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  Status status = Status::pass;
  std::vector<nlohmann::json> witnesses;
  std::vector<std::string> notes;
  long long ms = 0;
  std::string field;

  bool passed() const { return status == Status::pass; }
  void fail(nlohmann::json witness);
  void note(std::string text) { notes.push_back(std::move(text)); }
  // Folds another report's failures and notes into this one.
  void absorb(const VerificationReport& other);

  nlohmann::json to_json() const;
};

// Stopwatch that writes elapsed milliseconds into a report on destruction.
class ReportTimer {
 public:
  explicit ReportTimer(VerificationReport& report)
      : report_(report), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer() {
    report_.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start_)
                     .count();
  }
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  VerificationReport& report_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace oddterw
