#include "pcdiff/event_log.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "pcdiff/errors.hpp"
#include "pcdiff/rng.hpp"

namespace pcdiff::sim {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Mine: return "mine";
    case EventKind::Accept: return "accept";
    case EventKind::Reject: return "reject";
    case EventKind::Withhold: return "withhold";
    case EventKind::Release: return "release";
    case EventKind::Sample: return "sample";
    case EventKind::Attack: return "attack";
    case EventKind::GoodRounds: return "goodround";
    case EventKind::End: return "end";
  }
  return "unknown";
}

std::uint64_t id_salt(std::uint64_t seed) { return KeyedRng::mix(seed ^ 0x5bd1e9955bd1e995ULL); }

EventLog::EventLog(const SimConfig& config)
    : config_(config), store_(std::make_unique<BlockStore>(config.chain_count(), config.params, id_salt(config.seed))) {
  if (config.protocol == ProtocolKind::Ohie) ranks_ = std::make_unique<ohie::MetaTable>(*store_);
}

ChainView EventLog::reference_view() const {
  ChainView view(*store_);
  for (const auto& e : events)
    if (e.kind == EventKind::Accept && e.node == 0) view.insert(e.block);
  return view;
}

std::size_t EventLog::count(EventKind kind) const {
  std::size_t n = 0;
  for (const auto& e : events) n += e.kind == kind;
  return n;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string_view result_name(std::uint8_t code) {
  switch (static_cast<AttackResult>(code)) {
    case AttackResult::Success: return "success";
    case AttackResult::Failure: return "failure";
    case AttackResult::Unresolved: return "unresolved";
  }
  return "unknown";
}

void write_mine(std::string& line, const EventLog& log, const Event& e) {
  const BlockStore& s = log.store();
  const BlockRef b = e.block;
  const Miner m = s.miner(b);
  line += s.id(b).hex();
  line += ',';
  line += std::to_string(s.chain(b));
  line += ',';
  line += m.adversary ? 'a' : 'h';
  line += std::to_string(m.party);
  line += ',';
  line += s.target(b).str();
  line += ',';
  line += s.id(s.parent(b)).hex();
  line += ',';
  if (s.pivot_ref(b) != kNoBlock) line += s.id(s.pivot_ref(b)).hex();
  line += ',';
  line += std::to_string(s.timestamp(b));
  line += ",,,";
  const auto protocol = log.config().protocol;
  if (protocol == ProtocolKind::Prism && s.kind(b) == BlockKind::Chain && s.chain(b) != 0) {
    bool first = true;
    for (BlockRef p : log.votes().votes(b)) {
      if (!first) line += ';';
      line += s.id(p).hex();
      first = false;
    }
  } else if (protocol == ProtocolKind::FruitChains && s.kind(b) == BlockKind::Chain) {
    bool first = true;
    for (BlockRef f : log.fruits().fruits(b)) {
      if (!first) line += ';';
      line += s.id(f).hex();
      first = false;
    }
  } else if (protocol == ProtocolKind::Ohie) {
    const auto& meta = log.ranks()->get(b);
    line += meta.rank.str();
    line += '|';
    line += meta.next_rank.str();
    line += '|';
    line += s.id(meta.trailing_ref).hex();
  }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <class T>
T parse_int(std::string_view s, std::size_t line) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw LogFormatError("line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  return v;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw LogFormatError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

Rational parse_rational(std::string_view s, std::size_t line) {
  try {
    return Rational::parse(s);
  } catch (const Error&) {
    throw LogFormatError("line " + std::to_string(line) + ": bad rational '" + std::string(s) + "'");
  }
}

BlockRef parse_ref(const BlockStore& store, std::string_view hex, std::size_t line) {
  try {
    return store.lookup(BlockId::from_hex(hex));
  } catch (const LookupError& e) {
    throw LogFormatError("line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

void write_event_log(std::ostream& out, const EventLog& log) {
  out << kEventLogHeader << '\n';
  const BlockStore& s = log.store();
  std::string line;
  for (const auto& e : log.events) {
    line.clear();
    line += std::to_string(e.round);
    line += ',';
    line += to_string(e.kind);
    line += ',';
    switch (e.kind) {
      case EventKind::Mine:
        write_mine(line, log, e);
        break;
      case EventKind::Accept:
      case EventKind::Withhold:
      case EventKind::Release:
        line += s.id(e.block).hex();
        line += ",,,,,,,";
        line += std::to_string(e.node);
        line += ",,";
        break;
      case EventKind::Reject:
        line += s.id(e.block).hex();
        line += ",,,,,,,";
        line += std::to_string(e.node);
        line += ',';
        line += to_string(static_cast<Verdict>(e.code));
        line += ',';
        break;
      case EventKind::Sample: {
        const auto& smp = log.samples.at(e.aux);
        line += ",,,,,,,,,";
        line += fmt_double(smp.multiplier);
        line += ';';
        line += smp.min_target.str();
        line += ';';
        line += smp.max_target.str();
        break;
      }
      case EventKind::Attack:
        if (e.block != kNoBlock) line += s.id(e.block).hex();
        line += ",,,,,,,,";
        line += result_name(e.code);
        line += ',';
        break;
      case EventKind::GoodRounds:
        line += ",,,,,,,,,";
        line += std::to_string(log.good_rounds ? log.good_rounds->good : 0);
        line += '/';
        line += std::to_string(log.good_rounds ? log.good_rounds->total : 0);
        break;
      case EventKind::End:
        line += ",,,,,,,,,";
        break;
    }
    line += '\n';
    out << line;
  }
}

EventLog read_event_log(std::istream& in, const SimConfig& config) {
  EventLog log(config);
  BlockStore& store = log.store();
  std::string line;
  std::size_t n = 1;
  if (!std::getline(in, line) || line != kEventLogHeader) throw LogFormatError("event log header missing or wrong");
  std::vector<BlockRef> payload;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    if (log.complete) throw LogFormatError("line " + std::to_string(n) + ": data after end record");
    auto f = split(line, ',');
    if (f.size() != 12) throw LogFormatError("line " + std::to_string(n) + ": expected 12 fields");
    Event e;
    e.round = parse_int<Round>(f[0], n);
    const std::string_view kind = f[1];
    if (kind == "mine") {
      e.kind = EventKind::Mine;
      BlockDraft d;
      d.chain = parse_int<ChainId>(f[3], n);
      d.kind = d.chain == store.fruit_chain() ? BlockKind::Fruit : BlockKind::Chain;
      if (d.kind == BlockKind::Fruit) d.chain = 0;
      if (f[4].size() < 2 || (f[4][0] != 'h' && f[4][0] != 'a')) throw LogFormatError("line " + std::to_string(n) + ": bad miner class");
      d.miner = Miner{parse_int<std::uint32_t>(f[4].substr(1), n), f[4][0] == 'a'};
      d.target = parse_rational(f[5], n);
      d.parent = parse_ref(store, f[6], n);
      if (!f[7].empty()) d.pivot_ref = parse_ref(store, f[7], n);
      d.timestamp = parse_int<Round>(f[8], n);
      BlockRef b;
      try {
        b = store.add(d);
      } catch (const Error& err) {
        throw LogFormatError("line " + std::to_string(n) + ": " + err.what());
      }
      if (store.id(b).hex() != f[2]) throw LogFormatError("line " + std::to_string(n) + ": block id does not match its position");
      e.block = b;
      const auto protocol = config.protocol;
      if ((protocol == ProtocolKind::Prism && d.kind == BlockKind::Chain && d.chain != 0) ||
          (protocol == ProtocolKind::FruitChains && d.kind == BlockKind::Chain)) {
        payload.clear();
        if (!f[11].empty())
          for (auto id : split(f[11], ';')) payload.push_back(parse_ref(store, id, n));
        if (protocol == ProtocolKind::Prism)
          log.votes().set(b, payload);
        else
          log.fruits().set(b, payload);
      } else if (protocol == ProtocolKind::Ohie) {
        auto parts = split(f[11], '|');
        if (parts.size() != 3) throw LogFormatError("line " + std::to_string(n) + ": bad rank fields");
        ohie::OhieMeta meta;
        meta.rank = parse_rational(parts[0], n);
        meta.next_rank = parse_rational(parts[1], n);
        meta.trailing_ref = parse_ref(store, parts[2], n);
        meta.chain0_parent = ohie::chain0_parent(store, b);
        log.ranks()->set(b, std::move(meta));
      }
    } else if (kind == "accept" || kind == "withhold" || kind == "release" || kind == "reject") {
      e.kind = kind == "accept" ? EventKind::Accept
               : kind == "withhold" ? EventKind::Withhold
               : kind == "release" ? EventKind::Release
                                    : EventKind::Reject;
      e.block = parse_ref(store, f[2], n);
      e.node = parse_int<std::uint16_t>(f[9], n);
      if (e.kind == EventKind::Reject) {
        bool found = false;
        for (int v = 0; v <= static_cast<int>(Verdict::InvalidReference); ++v)
          if (to_string(static_cast<Verdict>(v)) == f[10]) {
            e.code = static_cast<std::uint8_t>(v);
            found = true;
          }
        if (!found) throw LogFormatError("line " + std::to_string(n) + ": unknown verdict");
      }
    } else if (kind == "sample") {
      e.kind = EventKind::Sample;
      auto parts = split(f[11], ';');
      if (parts.size() != 3) throw LogFormatError("line " + std::to_string(n) + ": bad sample fields");
      e.aux = static_cast<std::uint32_t>(log.samples.size());
      log.samples.push_back({e.round, parse_double(parts[0], n), parse_rational(parts[1], n), parse_rational(parts[2], n)});
    } else if (kind == "attack") {
      e.kind = EventKind::Attack;
      if (!f[2].empty()) e.block = parse_ref(store, f[2], n);
      if (f[10] == "success") e.code = static_cast<std::uint8_t>(AttackResult::Success);
      else if (f[10] == "failure") e.code = static_cast<std::uint8_t>(AttackResult::Failure);
      else if (f[10] == "unresolved") e.code = static_cast<std::uint8_t>(AttackResult::Unresolved);
      else throw LogFormatError("line " + std::to_string(n) + ": unknown attack result");
    } else if (kind == "goodround") {
      e.kind = EventKind::GoodRounds;
      auto parts = split(f[11], '/');
      if (parts.size() != 2) throw LogFormatError("line " + std::to_string(n) + ": bad good-round counts");
      log.good_rounds = GoodRounds{parse_int<std::uint64_t>(parts[0], n), parse_int<std::uint64_t>(parts[1], n)};
    } else if (kind == "end") {
      e.kind = EventKind::End;
      log.end_round = e.round;
      log.complete = true;
    } else {
      throw LogFormatError("line " + std::to_string(n) + ": unknown event '" + std::string(kind) + "'");
    }
    log.events.push_back(e);
  }
  if (!log.complete) throw LogFormatError("event log has no end record (partial log)");
  return log;
}

}  // namespace pcdiff::sim
