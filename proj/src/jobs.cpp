#include "logsift/jobs.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "logsift/core.hpp"
#include "logsift/io.hpp"

namespace logsift {

namespace {

std::string pad(std::uint64_t value, std::size_t width) {
  std::string s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::uint64_t parse_uint(std::string_view s, std::string_view context) {
  if (s.empty()) throw Error(ErrorCode::Parse, "empty number in host list '" + std::string(context) + "'");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::Parse, "bad number '" + std::string(s) + "' in host list '" + std::string(context) + "'");
    }
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

// Splits on commas that are outside brackets.
std::vector<std::string_view> top_level_items(std::string_view list) {
  std::vector<std::string_view> items;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] == '[') ++depth;
    if (list[i] == ']') --depth;
    if ((list[i] == ',' || list[i] == ' ' || list[i] == ';') && depth == 0) {
      if (i > start) items.push_back(list.substr(start, i - start));
      start = i + 1;
    }
  }
  if (start < list.size()) items.push_back(list.substr(start));
  return items;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back().push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw Error(ErrorCode::Parse, "jobs line " + std::to_string(line_no) + ": unterminated quote");
  return fields;
}

}  // namespace

std::vector<std::string> expand_hostlist(std::string_view list) {
  std::vector<std::string> out;
  for (std::string_view item : top_level_items(list)) {
    std::size_t open = item.find('[');
    if (open == std::string_view::npos) {
      out.emplace_back(item);
      continue;
    }
    std::size_t close = item.find(']', open);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::Parse, "unclosed '[' in host list '" + std::string(item) + "'");
    }
    std::string_view prefix = item.substr(0, open);
    std::string_view suffix = item.substr(close + 1);
    std::string_view body = item.substr(open + 1, close - open - 1);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t comma = body.find(',', pos);
      std::string_view range = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      std::size_t dash = range.find('-');
      std::string_view lo_s = range.substr(0, dash);
      std::string_view hi_s = dash == std::string_view::npos ? lo_s : range.substr(dash + 1);
      const std::uint64_t lo = parse_uint(lo_s, item), hi = parse_uint(hi_s, item);
      if (hi < lo) throw Error(ErrorCode::Parse, "descending range in host list '" + std::string(item) + "'");
      const std::size_t width = lo_s.size();
      for (std::uint64_t v = lo; v <= hi; ++v) {
        out.push_back(std::string(prefix) + pad(v, width) + std::string(suffix));
      }
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  return out;
}

std::vector<JobRecord> parse_jobs_csv(std::istream& in) {
  std::vector<JobRecord> jobs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    auto fields = split_csv_line(line, line_no);
    if (line_no == 1 && !fields.empty() && fields[0] == "job_id") continue;
    if (fields.size() != 5) {
      throw Error(ErrorCode::Parse, "jobs line " + std::to_string(line_no) + ": expected 5 fields, got " +
                                        std::to_string(fields.size()));
    }
    JobRecord job;
    job.job_id = fields[0];
    job.account = fields[1];
    auto start = parse_epoch_ns(fields[2]);
    auto end = parse_epoch_ns(fields[3]);
    if (!start || !end) {
      throw Error(ErrorCode::Parse, "jobs line " + std::to_string(line_no) + ": bad epoch value");
    }
    job.start_ns = *start;
    job.end_ns = *end;
    try {
      job.nodes = expand_hostlist(fields[4]);
    } catch (const Error& e) {
      std::string why = e.what();
      why.erase(0, why.find(": ") + 2);  // drop the code prefix added by Error
      throw Error(ErrorCode::Parse, "jobs line " + std::to_string(line_no) + ": " + why);
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

std::vector<JobRecord> read_jobs_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open jobs file '" + path + "'");
  return parse_jobs_csv(in);
}

std::vector<AllocationOverlap> find_overlaps(std::span<const JobRecord> jobs) {
  std::unordered_map<std::string, std::vector<std::size_t>> by_node;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    for (const auto& n : jobs[j].nodes) by_node[n].push_back(j);
  }
  std::vector<AllocationOverlap> out;
  std::vector<std::string> nodes;
  for (const auto& [n, _] : by_node) nodes.push_back(n);
  std::sort(nodes.begin(), nodes.end());
  for (const auto& node : nodes) {
    auto ids = by_node[node];
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      return jobs[a].start_ns != jobs[b].start_ns ? jobs[a].start_ns < jobs[b].start_ns : a < b;
    });
    // Sweep: compare each job with every earlier job still running.
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t k = i + 1; k < ids.size() && jobs[ids[k]].start_ns < jobs[ids[i]].end_ns; ++k) {
        out.push_back({node, jobs[ids[i]].job_id, jobs[ids[k]].job_id});
      }
    }
  }
  return out;
}

JobIndex JobIndex::build(std::vector<JobRecord> jobs) {
  for (const auto& j : jobs) {
    if (j.start_ns >= j.end_ns) {
      throw Error(ErrorCode::InvalidArgument, "job " + j.job_id + " has start >= end");
    }
  }
  auto overlaps = find_overlaps(jobs);
  if (!overlaps.empty()) {
    std::string msg = std::to_string(overlaps.size()) + " overlapping allocation(s):";
    for (std::size_t i = 0; i < overlaps.size() && i < 20; ++i) {
      msg += " [" + overlaps[i].node + ": " + overlaps[i].first_job + " / " + overlaps[i].second_job + "]";
    }
    throw Error(ErrorCode::OverlappingAllocations, msg);
  }
  JobIndex index;
  index.jobs_ = std::move(jobs);
  for (std::size_t j = 0; j < index.jobs_.size(); ++j) {
    for (const auto& n : index.jobs_[j].nodes) {
      index.by_node_[n].push_back({index.jobs_[j].start_ns, index.jobs_[j].end_ns, j});
    }
  }
  for (auto& [_, slots] : index.by_node_) {
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.start_ns < b.start_ns; });
  }
  return index;
}

std::optional<std::size_t> JobIndex::find(std::string_view host, std::int64_t timestamp_ns) const {
  auto it = by_node_.find(std::string(host));
  if (it == by_node_.end()) return std::nullopt;
  const auto& slots = it->second;
  auto after = std::upper_bound(slots.begin(), slots.end(), timestamp_ns,
                                [](std::int64_t t, const Slot& s) { return t < s.start_ns; });
  if (after == slots.begin()) return std::nullopt;
  const Slot& s = *std::prev(after);
  if (timestamp_ns < s.end_ns) return s.job;
  return std::nullopt;
}

std::vector<std::optional<std::size_t>> join_jobs(std::span<const JoinInput> events, const JobIndex& index) {
  std::vector<std::optional<std::size_t>> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    if (e.host && e.timestamp_ns) {
      out.push_back(index.find(*e.host, *e.timestamp_ns));
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace logsift
