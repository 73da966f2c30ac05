#include "logsift/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_set>

namespace logsift {

namespace {

constexpr const char* kVocabulary[] = {
    "kernel:", "cxi_core", "kfi_cxi", "slurmd", "lustre", "lnet", "nvme", "scsi", "amdgpu",
    "hsn", "link", "port", "node", "job", "task", "step", "memory", "page", "fault", "queue",
    "request", "response", "packet", "buffer", "cache", "device", "driver", "firmware",
    "module", "service", "daemon", "session", "user", "group", "file", "block", "sector",
    "disk", "volume", "mount", "timeout", "timed", "out", "of", "on", "in", "for", "from",
    "to", "with", "at", "by", "is", "was", "has", "not", "no", "error", "error:", "failed",
    "failure", "warning:", "warn", "critical", "fatal", "panic", "crash", "ecc", "corrected",
    "uncorrectable", "pcie", "retry", "retrying", "degraded", "started", "stopped", "starting",
    "completed", "accepted", "refused", "denied", "killed", "process", "oom", "allocated",
    "released", "registered", "unregistered", "opened", "closed", "connection", "connect",
    "reset", "up", "down", "ready", "busy", "idle", "pending", "running", "finished", "exit",
    "status", "code", "value", "limit", "exceeded", "threshold", "temperature", "sensor",
    "voltage", "power", "fan", "dhcp", "lease", "renewed", "stack", "trace", "dropped",
    "messages", "suppressed", "protocol", "handler", "callback", "event", "interrupt", "mce",
    "bank", "dimm", "channel", "rank", "state", "changed", "transition", "mismatch",
    "invalid", "unknown", "missing", "found", "loaded", "unloaded", "info:", "notice:",
};

constexpr const char* kKeys[] = {"pid", "rc", "port", "size", "addr", "node", "job", "uid", "err",
                                 "len", "seq", "ts", "path", "nid"};

constexpr MaskClass kClasses[] = {MaskClass::Num, MaskClass::Hex, MaskClass::Ip, MaskClass::Ts,
                                  MaskClass::Path};

std::string_view class_name(MaskClass c) {
  switch (c) {
    case MaskClass::Num: return "num";
    case MaskClass::Hex: return "hex";
    case MaskClass::Ip: return "ip";
    case MaskClass::Ts: return "ts";
    case MaskClass::Path: return "path";
    case MaskClass::None: break;
  }
  return "var";
}

std::string digits(SplitMix64& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
  return s;
}

std::string two(std::uint64_t v) {
  char buf[4];
  std::snprintf(buf, sizeof buf, "%02u", static_cast<unsigned>(v));
  return buf;
}

}  // namespace

std::string random_value(MaskClass cls, SplitMix64& rng) {
  switch (cls) {
    case MaskClass::Num: {
      std::string v = std::to_string(rng.below(1'000'000));
      if (rng.below(4) == 0) v += "." + digits(rng, 1 + static_cast<int>(rng.below(3)));
      return v;
    }
    case MaskClass::Hex: {
      static constexpr char kHex[] = "0123456789abcdef";
      std::string v = "0x";
      const int n = 4 + static_cast<int>(rng.below(9));
      for (int i = 0; i < n; ++i) v.push_back(kHex[rng.below(16)]);
      return v;
    }
    case MaskClass::Ip:
      return std::to_string(rng.below(256)) + "." + std::to_string(rng.below(256)) + "." +
             std::to_string(rng.below(256)) + "." + std::to_string(rng.below(256));
    case MaskClass::Ts:
      return "2024-" + two(1 + rng.below(12)) + "-" + two(1 + rng.below(28)) + "T" + two(rng.below(24)) +
             ":" + two(rng.below(60)) + ":" + two(rng.below(60)) + "." + digits(rng, 3) + "Z";
    case MaskClass::Path: {
      static constexpr const char* kRoots[] = {"/lustre/orion/proj", "/var/log/node", "/tmp/job",
                                               "/dev/nvme", "/sys/class/cxi"};
      return std::string(kRoots[rng.below(std::size(kRoots))]) + digits(rng, 1 + static_cast<int>(rng.below(4))) +
             "/part" + digits(rng, 1) + ".dat";
    }
    case MaskClass::None: break;
  }
  return "value";
}

CorpusGenerator::CorpusGenerator(const CorpusOptions& options) : options_(options), rng_(options.seed) {
  if (options.templates == 0) throw Error(ErrorCode::InvalidArgument, "need at least one template");
  if (options.lines < options.templates) {
    throw Error(ErrorCode::InvalidArgument, "lines must be >= templates");
  }
  SplitMix64 shape_rng(mix_seed(options.seed, 0x7e3a));
  std::unordered_set<std::string> seen;
  while (templates_.size() < options.templates) {
    const std::size_t width = 2 + shape_rng.below(11);
    const std::size_t max_vars = std::min<std::size_t>(4, width - 1);
    const std::size_t n_vars = shape_rng.below(max_vars + 1);
    std::vector<std::size_t> positions(width);
    for (std::size_t i = 0; i < width; ++i) positions[i] = i;
    // Partial Fisher-Yates; never make position 0 variable so templates keep a
    // literal anchor.
    for (std::size_t i = 0; i < n_vars; ++i) {
      std::size_t j = 1 + i + shape_rng.below(width - 1 - i);
      std::swap(positions[1 + i], positions[j]);
    }
    std::vector<bool> is_var(width, false);
    for (std::size_t i = 0; i < n_vars; ++i) is_var[positions[1 + i]] = true;

    std::vector<Slot> slots;
    std::vector<Token> tokens;
    std::array<int, 6> class_uses{};
    for (std::size_t w = 0; w < width; ++w) {
      if (w > 0) tokens.emplace_back(Literal{" "});
      if (!is_var[w]) {
        std::string word = kVocabulary[shape_rng.below(std::size(kVocabulary))];
        tokens.emplace_back(Literal{word});
        slots.push_back({false, std::move(word), MaskClass::None});
        continue;
      }
      MaskClass cls = kClasses[shape_rng.below(std::size(kClasses))];
      int use = ++class_uses[static_cast<std::size_t>(cls)];
      std::string name(class_name(cls));
      if (use > 1) name += "_" + std::to_string(use);
      std::string prefix;
      if (shape_rng.below(3) == 0) prefix = std::string(kKeys[shape_rng.below(std::size(kKeys))]) + "=";
      if (!prefix.empty()) tokens.emplace_back(Literal{prefix});
      tokens.emplace_back(Placeholder{name});
      slots.push_back({true, std::move(prefix), cls});
    }
    LogTemplate t = LogTemplate::from_tokens(std::move(tokens));
    if (!seen.insert(t.raw()).second) continue;
    templates_.push_back(std::move(t));
    slots_.push_back(std::move(slots));
  }

  double total = 0.0;
  for (std::size_t i = 0; i < templates_.size(); ++i) {
    weights_.push_back(1.0 / std::pow(static_cast<double>(i + 1), options.zipf_exponent));
    total += weights_.back();
  }
  double acc = 0.0;
  for (double& w : weights_) {
    w /= total;
    acc += w;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
  clock_ns_ = options.start_epoch_s * 1'000'000'000;
}

std::string CorpusGenerator::instantiate(std::size_t index, SplitMix64& rng) const {
  std::string out;
  for (const Slot& s : slots_[index]) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
    if (s.variable) out += random_value(s.cls, rng);
  }
  return out;
}

bool CorpusGenerator::next(GeneratedLine& out) {
  if (produced_ >= options_.lines) return false;
  ++produced_;
  // The first k lines cover every template once; the rest follow the Zipf law.
  std::size_t index;
  if (produced_ <= templates_.size()) {
    index = static_cast<std::size_t>(produced_ - 1);
  } else {
    const double u = rng_.uniform();
    index = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                     cumulative_.begin());
    index = std::min(index, templates_.size() - 1);
  }
  const auto step_ns = static_cast<std::int64_t>(2.0 * options_.mean_interval_s * 1e9 * rng_.uniform());
  clock_ns_ += step_ns;
  char host[32];
  std::snprintf(host, sizeof host, "frontier%05u",
                static_cast<unsigned>(1 + rng_.below(std::max<std::size_t>(options_.hosts, 1))));
  out.line_no = produced_;
  out.timestamp_ns = clock_ns_;
  out.host = host;
  out.template_index = index;
  out.message = instantiate(index, rng_);
  return true;
}

void write_corpus(const CorpusOptions& options, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  CorpusGenerator gen(options);
  {
    std::ofstream t(fs::path(dir) / "gold_templates.txt", std::ios::binary);
    if (!t) throw Error(ErrorCode::Io, "cannot write into '" + dir + "'");
    for (const auto& tmpl : gen.templates()) t << tmpl.raw() << '\n';
  }
  std::ofstream corpus(fs::path(dir) / "corpus.log", std::ios::binary);
  std::ofstream map(fs::path(dir) / "gold_map.tsv", std::ios::binary);
  if (!corpus || !map) throw Error(ErrorCode::Io, "cannot write into '" + dir + "'");
  GeneratedLine line;
  std::string buf;
  while (gen.next(line)) {
    buf.clear();
    buf += std::to_string(line.timestamp_ns / 1'000'000'000);
    buf += '.';
    std::string ms = std::to_string((line.timestamp_ns / 1'000'000) % 1000);
    buf.append(3 - ms.size(), '0');
    buf += ms;
    buf += '\t';
    buf += line.host;
    buf += '\t';
    buf += line.message;
    buf += '\n';
    corpus << buf;
    map << line.line_no << '\t' << gen.templates()[line.template_index].id() << '\n';
  }
}

}  // namespace logsift
