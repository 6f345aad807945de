#include "lipforge/epm.hpp"

#include <algorithm>
#include <sstream>

namespace lipforge {
namespace {

// Fraction of the removed gap that sits left of it.
const Rational& gap_split(uint64_t draw) {
  static const Rational kChoices[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2),
                                      Rational(2, 3), Rational(3, 4)};
  return kChoices[draw % 5];
}

Interval parse_bracket(const std::string& tok) {
  if (tok.size() < 5) throw ValidationError("bad interval token '" + tok + "'");
  auto comma = tok.find(',');
  if (comma == std::string::npos) throw ValidationError("bad interval token '" + tok + "'");
  Interval iv{Rational::parse(tok.substr(1, comma - 1)),
              Rational::parse(tok.substr(comma + 1, tok.size() - comma - 2)),
              tok.front() == '[', tok.back() == ']'};
  iv.validate();
  return iv;
}

}  // namespace

AllocationError::AllocationError(int owner_, Interval target_, Rational deficit_)
    : Error("allocation failure for owner " + std::to_string(owner_) + " in " +
            target_.str() + ": short by " + deficit_.str()),
      owner(owner_),
      target(std::move(target_)),
      deficit(std::move(deficit_)) {}

EpmRegistry::EpmRegistry(uint64_t seed, Exclusivity mode)
    : seed_(seed), mode_(mode), rng_(seed) {}

void EpmRegistry::occupy(const IntervalSet& parts) {
  for (const Interval& p : parts.parts()) occupied_.emplace(p.lo, p);
}

void EpmRegistry::index_owner(int owner) {
  if (mode_ == Exclusivity::kGlobal || owner == indexed_owner_) return;
  occupied_.clear();
  for (const PieceRecord& r : records_)
    if (r.owner == owner) occupy(r.piece.kept);
  indexed_owner_ = owner;
}

size_t EpmRegistry::allocate(int owner, const Interval& target, const Rational& m,
                             const IntervalSet& avoid, int avoid_level) {
  if (m.sign() <= 0) throw ValidationError("allocation measure must be positive");
  if (!(target.lo < target.hi)) throw ValidationError("allocation target " + target.str() + " is degenerate");
  index_owner(owner);

  // Blocked parts meeting the target.
  std::vector<Interval> blocked;
  const auto& ap = avoid.parts();
  auto it = std::partition_point(ap.begin(), ap.end(),
                                 [&](const Interval& p) { return p.hi < target.lo; });
  for (; it != ap.end() && it->lo <= target.hi; ++it) blocked.push_back(*it);
  auto ot = occupied_.lower_bound(target.lo);
  if (ot != occupied_.begin()) --ot;
  for (; ot != occupied_.end() && ot->first <= target.hi; ++ot) blocked.push_back(ot->second);

  IntervalSet free = IntervalSet::from_canonical({target});
  if (!blocked.empty()) free = difference(free, IntervalSet(std::move(blocked)));

  // Hosts: free components shrunk by 1/8 of their length at each end, largest first.
  std::vector<Interval> hosts;
  for (const Interval& c : free.parts()) {
    if (c.degenerate()) continue;
    Rational cut = c.length() / Rational(8);
    hosts.push_back(Interval::closed(c.lo + cut, c.hi - cut));
  }
  std::stable_sort(hosts.begin(), hosts.end(), [](const Interval& a, const Interval& b) {
    return a.length() > b.length();
  });
  Rational need = m;
  size_t used = 0;
  while (used < hosts.size() && need.sign() > 0) {
    need -= min(need, hosts[used].length());
    ++used;
  }
  if (need.sign() > 0) throw AllocationError(owner, target, need);
  hosts.resize(used);
  std::sort(hosts.begin(), hosts.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo;
  });

  FatCantorPiece piece{target, {}, m, 0};
  std::vector<Interval> kept;
  // Hand out the measure largest-host-first so the result does not depend on
  // the position order above.
  std::vector<Rational> share(hosts.size());
  {
    std::vector<size_t> order(hosts.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return hosts[a].length() > hosts[b].length();
    });
    Rational left = m;
    for (size_t i : order) {
      share[i] = min(left, hosts[i].length());
      left -= share[i];
    }
  }
  for (size_t i = 0; i < hosts.size(); ++i) {
    const Interval& h = hosts[i];
    const Rational& a = share[i];
    if (a.sign() <= 0) continue;
    if (a == h.length()) {
      kept.push_back(h);
      continue;
    }
    const Rational& t = gap_split(rng_());
    kept.push_back(Interval::closed(h.lo, h.lo + t * a));
    kept.push_back(Interval::closed(h.hi - (Rational(1) - t) * a, h.hi));
    piece.depth = 1;
  }
  piece.kept = IntervalSet::from_canonical(std::move(kept));
  occupy(piece.kept);
  records_.push_back({owner, avoid_level, std::move(piece)});
  return records_.size() - 1;
}

std::string EpmRegistry::dump() const {
  std::ostringstream os;
  os << "# registry seed=" << seed_
     << " mode=" << (mode_ == Exclusivity::kGlobal ? "global" : "per-owner") << "\n";
  os << "# owner avoid_level depth measure target kept\n";
  for (const PieceRecord& r : records_) {
    os << r.owner << ' ' << r.avoid_level << ' ' << r.piece.depth << ' '
       << r.piece.measure << ' ' << r.piece.target.str() << ' ';
    const auto& ps = r.piece.kept.parts();
    for (size_t i = 0; i < ps.size(); ++i) os << (i ? ";" : "") << ps[i].str();
    os << '\n';
  }
  return os.str();
}

EpmRegistry EpmRegistry::parse_dump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# registry seed=", 0) != 0)
    throw ValidationError("registry dump: missing header");
  uint64_t seed = 0;
  std::string mode;
  {
    std::istringstream hs(line.substr(16));
    hs >> seed;
    std::string m;
    hs >> m;
    mode = m.substr(m.find('=') + 1);
  }
  EpmRegistry reg(seed, mode == "global" ? Exclusivity::kGlobal : Exclusivity::kPerOwner);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    PieceRecord r;
    std::string measure, target, kept;
    if (!(ls >> r.owner >> r.avoid_level >> r.piece.depth >> measure >> target >> kept))
      throw ValidationError("registry dump: bad line '" + line + "'");
    r.piece.measure = Rational::parse(measure);
    r.piece.target = parse_bracket(target);
    std::vector<Interval> parts;
    std::istringstream ks(kept);
    std::string tok;
    while (std::getline(ks, tok, ';')) parts.push_back(parse_bracket(tok));
    r.piece.kept = IntervalSet::from_canonical(std::move(parts));
    reg.records_.push_back(std::move(r));
  }
  return reg;
}

bool operator==(const FatCantorPiece& a, const FatCantorPiece& b) {
  return a.target == b.target && a.kept == b.kept && a.measure == b.measure &&
         a.depth == b.depth;
}

bool operator==(const PieceRecord& a, const PieceRecord& b) {
  return a.owner == b.owner && a.avoid_level == b.avoid_level && a.piece == b.piece;
}

bool operator==(const EpmRegistry& a, const EpmRegistry& b) {
  return a.seed_ == b.seed_ && a.mode_ == b.mode_ && a.records_ == b.records_;
}

FatCantorPiece alloc_piece(EpmRegistry& reg, int owner, const Interval& target,
                           const Rational& min_measure, const IntervalSet& avoid,
                           int avoid_level) {
  return reg[reg.allocate(owner, target, min_measure, avoid, avoid_level)].piece;
}

std::vector<std::pair<FatCantorPiece, FatCantorPiece>> split_epm(
    EpmRegistry& reg, const std::vector<Interval>& basis) {
  std::vector<std::pair<FatCantorPiece, FatCantorPiece>> out;
  for (const Interval& b : basis) {
    Interval target = Interval::open(b.lo, b.hi);
    Rational m = b.length() / Rational(32);
    FatCantorPiece p1 = alloc_piece(reg, 1, target, m);
    FatCantorPiece p2 = alloc_piece(reg, 2, target, m);
    out.emplace_back(std::move(p1), std::move(p2));
  }
  return out;
}

std::vector<Interval> dyadic_basis(int depth) {
  std::vector<Interval> out;
  for (int n = 1; n <= depth; ++n) {
    long long cnt = 1LL << n;
    for (long long i = 0; i < cnt; ++i)
      out.push_back(Interval::closed(Rational(i, cnt), Rational(i + 1, cnt)));
  }
  return out;
}

}  // namespace lipforge
