#include "oddterw/report.hpp"

namespace oddterw {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::skipped:
      return "skipped";
  }
  return "unknown";
}

void VerificationReport::fail(nlohmann::json witness) {
  status = Status::fail;
  witnesses.push_back(std::move(witness));
}

void VerificationReport::absorb(const VerificationReport& other) {
  if (other.status == Status::fail) {
    status = Status::fail;
    for (const auto& w : other.witnesses) {
      nlohmann::json tagged = w;
      if (tagged.is_object() && !tagged.contains("check")) tagged["check"] = other.name;
      witnesses.push_back(std::move(tagged));
    }
  }
  for (const auto& n : other.notes) notes.push_back(other.name + ": " + n);
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["status"] = to_string(status);
  j["parameters"] = parameters;
  j["witnesses"] = witnesses;
  j["notes"] = notes;
  j["ms"] = ms;
  j["field"] = field;
  return j;
}

}  // namespace oddterw
