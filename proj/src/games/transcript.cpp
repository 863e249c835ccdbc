#include "qfelab/games/transcript.hpp"

#include <cstdio>

#include <json.hpp>

#include "qfelab/hash.hpp"

namespace qfelab::games {

void Transcript::record(std::string role, std::string kind, std::string payload,
                        std::uint64_t seed) {
  events.push_back({std::move(role), std::move(kind), std::move(payload), seed});
}

std::vector<Event> Transcript::protocol_events() const {
  std::vector<Event> out;
  for (const Event& e : events) {
    if (e.role != kRefereeRole) out.push_back(e);
  }
  return out;
}

bool Transcript::same_protocol(const Transcript& other) const {
  return protocol_events() == other.protocol_events();
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const Event& e : events) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(e.payload)));
    nlohmann::json line{{"role", e.role}, {"kind", e.kind}, {"payload_hash", hash}, {"seed", e.seed}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace qfelab::games
