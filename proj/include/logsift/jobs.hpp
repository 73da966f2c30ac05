#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace logsift {

struct JobRecord {
  std::string job_id;
  std::string account;  // science domain
  std::vector<std::string> nodes;
  std::int64_t start_ns = 0;  // inclusive
  std::int64_t end_ns = 0;    // exclusive
};

/// Expands a Slurm-style host list: "frontier[0001-0003,0007],login1" ->
/// frontier0001 frontier0002 frontier0003 frontier0007 login1. Zero padding
/// follows the width of the range bounds.
std::vector<std::string> expand_hostlist(std::string_view list);

/// `job_id,account,start_epoch,end_epoch,node_list` with an optional header
/// row and RFC 4180 quoting. Throws Error{Parse} naming the line.
std::vector<JobRecord> parse_jobs_csv(std::istream& in);
std::vector<JobRecord> read_jobs_csv(const std::string& path);

struct AllocationOverlap {
  std::string node;
  std::string first_job;
  std::string second_job;
};

/// Every pair of jobs sharing a node with intersecting intervals.
std::vector<AllocationOverlap> find_overlaps(std::span<const JobRecord> jobs);

/// Per-node interval index over an exclusive-allocation schedule.
class JobIndex {
 public:
  /// Throws Error{InvalidArgument} for start >= end and
  /// Error{OverlappingAllocations} listing offending pairs.
  static JobIndex build(std::vector<JobRecord> jobs);

  /// Job whose node set holds `host` and whose interval holds `t`.
  std::optional<std::size_t> find(std::string_view host, std::int64_t timestamp_ns) const;

  const std::vector<JobRecord>& jobs() const noexcept { return jobs_; }

 private:
  struct Slot {
    std::int64_t start_ns, end_ns;
    std::size_t job;
  };
  std::vector<JobRecord> jobs_;
  std::unordered_map<std::string, std::vector<Slot>> by_node_;  // sorted by start
};

struct JoinInput {
  std::optional<std::string> host;
  std::optional<std::int64_t> timestamp_ns;
};

/// Index of the owning job per event; nullopt marks an unmatched event.
std::vector<std::optional<std::size_t>> join_jobs(std::span<const JoinInput> events, const JobIndex& index);

}  // namespace logsift
