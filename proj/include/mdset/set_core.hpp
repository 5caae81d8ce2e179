#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mdset/arith.hpp"
#include "mdset/error.hpp"

namespace mdset {

// Hard cap on how many objects (words, cylinders, lattice points) a single
// enumeration may visit before we refuse instead of grinding.
inline constexpr std::uint64_t kEnumGuard = 10'000'000;

// Iteration cap for digit-expansion long division (cycle detection bound).
inline constexpr std::uint64_t kExpandGuard = 200'000;

// One coordinate's digit alphabet: a proper subset of {0,...,base-1} with at
// least two digits, kept strictly increasing.
struct DigitSet {
    int base = 0;
    std::vector<int> digits;

    int count() const { return static_cast<int>(digits.size()); }
    int min_digit() const { return digits.front(); }
    int max_digit() const { return digits.back(); }
    bool allows(int digit) const;

    // Throws invalid_argument_error unless base >= 3, digits are strictly
    // increasing within range, and 2 <= |digits| <= base-1.
    void validate() const;
};

// A product of digit-restricted sets sharing one base, living in [0,1]^d.
// Branch symbols s in [0, branch_count()) index digit tuples in row-major
// order with coordinate 0 most significant, so symbol order equals
// lexicographic order of digit tuples.
struct ProductSet {
    int base = 0;
    std::vector<DigitSet> coords;

    int dim() const { return static_cast<int>(coords.size()); }
    std::uint64_t branch_count() const;
    std::vector<int> symbol_digits(std::uint64_t symbol) const;
    void validate() const;
};

// A composition word: branch symbols, first symbol = coarsest level.
using Word = std::vector<std::uint64_t>;

// Eventually periodic digit stream for one coordinate: value =
// 0.prefix(period)^inf in the given base. period must be nonempty.
struct CoordDigits {
    std::vector<int> prefix;
    std::vector<int> period;
};

// A point of the product set, given by per-coordinate digit streams.
struct PointDigits {
    std::vector<CoordDigits> coords;
};

// Axis-aligned box with exact rational corners.
struct Box {
    std::vector<Rational> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
};

// --- digit-stream plumbing ----------------------------------------------

// Exact value of an eventually periodic stream.
Rational coord_value(const CoordDigits& cd, int base);

// Greedy base-b expansion of x in [0,1); terminating values get period {0}.
// Guarded by kExpandGuard (cycle detection on long-division remainders).
CoordDigits expand_value(const Rational& x, int base);

// Digit stream over the coordinate alphabet representing x exactly. Branch
// hulls of distinct digits overlap in at most one point, so the largest
// feasible digit is always the unique viable choice (no backtracking).
// Throws invalid_argument_error when x has no expansion over the alphabet.
CoordDigits alphabet_expand(const DigitSet& ds, const Rational& x);

// The all-minimal-digits fixed point of the first branch map; the default
// base point for orbit constructions.
PointDigits min_fixed_point(const ProductSet& ps);

std::vector<Rational> point_value(const ProductSet& ps, const PointDigits& x);

// Throws invalid_argument_error if the streams use digits outside the
// coordinate alphabets, have empty periods, or the arity mismatches.
void validate_point(const ProductSet& ps, const PointDigits& x);

// --- geometry -------------------------------------------------------------

double dim_coordinate(const DigitSet& ds);
double dim_product(const ProductSet& ps);

// Exact diameter of one coordinate factor: (max J - min J)/(base - 1).
Rational diam_coordinate(const DigitSet& ds);

// Sup-metric diameter of the product: max over coordinates.
Rational diam_product(const ProductSet& ps);

// Image of x under the composition indexed by the word (digit prepend; exact).
PointDigits apply_word(const ProductSet& ps, const Word& w, const PointDigits& x);

// Smallest axis box containing the cylinder of the word (exact corners);
// the empty word gives the hull of the whole set.
Box cylinder_box(const ProductSet& ps, const Word& w);

// --- membership -----------------------------------------------------------

// True iff x has SOME base-b expansion with every digit in the alphabet;
// both expansions of b-adic rationals are tried.
bool contains_value(const DigitSet& ds, const Rational& x);
bool contains_point(const ProductSet& ps, const std::vector<Rational>& x);

// --- lattice orbit points ---------------------------------------------------

// A point of (1/b^n)Z^d within [0,1]^d: numerators over the common b^n.
struct LatticePoint {
    std::vector<BigInt> num;
    unsigned den_pow = 0;
};

bool operator==(const LatticePoint& a, const LatticePoint& b);
bool operator<(const LatticePoint& a, const LatticePoint& b); // lexicographic

// All images of the corner grid {0,1}^d under level-n compositions, deduped
// and lex-sorted. Requires {0, base-1} inside every coordinate alphabet
// (else invalid_argument_error naming the coordinate); enumeration refuses
// via guard_error when branch_count^n exceeds kEnumGuard.
std::vector<LatticePoint> lattice_orbit_points(const ProductSet& ps, unsigned n);

// Number of words of length n; throws guard_error beyond kEnumGuard.
std::uint64_t checked_word_count(const ProductSet& ps, unsigned n);

} // namespace mdset
