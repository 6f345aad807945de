// Allocation of small fat-Cantor pieces inside prescribed open intervals.
#ifndef LIPFORGE_EPM_HPP_
#define LIPFORGE_EPM_HPP_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lipforge/interval.hpp"

namespace lipforge {

struct FatCantorPiece {
  Interval target;      // interval the piece was requested in
  IntervalSet kept;     // closed parts
  Rational measure;     // exactly the requested measure
  int depth = 0;        // number of removed gaps per host
};

class AllocationError : public Error {
 public:
  AllocationError(int owner, Interval target, Rational deficit);
  int owner;
  Interval target;
  Rational deficit;
};

// kGlobal: every piece is disjoint from every earlier piece.
// kPerOwner: pieces of one owner are disjoint; owners may overlap.
enum class Exclusivity { kGlobal, kPerOwner };

struct PieceRecord {
  int owner = 0;
  int avoid_level = 0;
  FatCantorPiece piece;
};

class EpmRegistry {
 public:
  explicit EpmRegistry(uint64_t seed = 0, Exclusivity mode = Exclusivity::kGlobal);

  const std::vector<PieceRecord>& records() const { return records_; }
  const PieceRecord& operator[](size_t i) const { return records_[i]; }
  size_t size() const { return records_.size(); }
  uint64_t seed() const { return seed_; }
  Exclusivity mode() const { return mode_; }

  // Places a piece of measure exactly min_measure in `target`, off `avoid`
  // and off the pieces it must stay disjoint from. Returns the record index.
  size_t allocate(int owner, const Interval& target, const Rational& min_measure,
                  const IntervalSet& avoid, int avoid_level);

  // One record per line; parse_dump(dump()) restores the same records.
  std::string dump() const;
  static EpmRegistry parse_dump(const std::string& text);

  friend bool operator==(const EpmRegistry& a, const EpmRegistry& b);

 private:
  void index_owner(int owner);
  void occupy(const IntervalSet& parts);

  uint64_t seed_;
  Exclusivity mode_;
  std::mt19937_64 rng_;
  std::vector<PieceRecord> records_;
  // Occupied parts keyed by left endpoint. In kPerOwner mode this only holds
  // the parts of `indexed_owner_`.
  std::map<Rational, Interval> occupied_;
  int indexed_owner_ = -1;
};

bool operator==(const PieceRecord& a, const PieceRecord& b);
bool operator==(const FatCantorPiece& a, const FatCantorPiece& b);

FatCantorPiece alloc_piece(EpmRegistry& reg, int owner, const Interval& target,
                           const Rational& min_measure, const IntervalSet& avoid = {},
                           int avoid_level = 0);

// Two disjoint pieces inside every basis interval, all pairwise disjoint.
std::vector<std::pair<FatCantorPiece, FatCantorPiece>> split_epm(
    EpmRegistry& reg, const std::vector<Interval>& basis);

// Dyadic intervals [i/2^n, (i+1)/2^n] of [0,1] for n = 1..depth.
std::vector<Interval> dyadic_basis(int depth);

}  // namespace lipforge

#endif  // LIPFORGE_EPM_HPP_
