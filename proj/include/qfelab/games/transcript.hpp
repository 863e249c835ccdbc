#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qfelab::games {

struct Event {
  std::string role;
  std::string kind;
  std::string payload;
  // Seed of the random stream that produced the event (0 for deterministic steps).
  std::uint64_t seed = 0;

  bool operator==(const Event&) const = default;
};

// Role name for bookkeeping events (announcements, hidden coins) that are not part
// of the message flow between the parties.
inline constexpr const char* kRefereeRole = "referee";

struct Transcript {
  std::vector<Event> events;
  int outcome = 0;

  void record(std::string role, std::string kind, std::string payload, std::uint64_t seed = 0);
  // Events excluding the referee role.
  std::vector<Event> protocol_events() const;
  bool same_protocol(const Transcript& other) const;
  // One JSON object per event: role, kind, payload hash, seed.
  std::string to_jsonl() const;
};

}  // namespace qfelab::games
