#pragma once

#include "msflow/error.hpp"
#include "msflow/flow_system.hpp"
#include "msflow/gf2.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace msflow::ej {

/// plain: a rest point; minus/plus: the two copies of a closed orbit of
/// index k, living in degrees k and k+1.
enum class Flavor { plain, minus, plus };

struct BasisElement {
    std::string origin;
    Flavor flavor = Flavor::plain;
    int degree = 0;

    /// "s1", "gamma-", "gamma+".
    std::string label() const;

    friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

/// Graded GF(2) complex; boundary(k) maps degree k to degree k-1, rows
/// indexed by basis(k-1) and columns by basis(k). boundary(0) is 0 x |B_0|.
class ChainComplexGF2 {
public:
    ChainComplexGF2() = default;
    ChainComplexGF2(int top_degree, std::vector<std::vector<BasisElement>> bases,
                    std::vector<gf2::MatrixGF2> boundaries);

    int top_degree() const noexcept { return top_degree_; }
    const std::vector<BasisElement>& basis(int k) const;
    const gf2::MatrixGF2& boundary(int k) const;

    /// Position of `label` in basis(k), or npos.
    std::size_t find(int k, const std::string& label) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const ChainComplexGF2&, const ChainComplexGF2&) = default;

private:
    int top_degree_ = 0;
    std::vector<std::vector<BasisElement>> bases_;
    std::vector<gf2::MatrixGF2> boundaries_;
};

/// Basis per degree: rest points, then minus copies, then plus copies, each
/// in declaration order. Entry (b', b) of boundary(k) is
/// c(origin(b), origin(b')) mod 2, and 0 when both copies share an orbit.
/// Throws InvalidSystem when the system fails non-strict validation.
ChainComplexGF2 build_complex(const flow::FlowSystem& s);

/// A nonzero entry of boundary(degree-1) * boundary(degree).
struct D2Violation {
    int degree = 0;
    BasisElement source;  // in degree
    BasisElement target;  // in degree - 2

    friend bool operator==(const D2Violation&, const D2Violation&) = default;
};

std::vector<D2Violation> check_d2(const ChainComplexGF2& c);

class NotAChainComplex : public Error {
public:
    explicit NotAChainComplex(std::vector<D2Violation> violations);
    const std::vector<D2Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<D2Violation> violations_;
};

/// GF(2) Betti numbers b_0..b_n. Throws NotAChainComplex when d^2 != 0.
std::vector<int> betti(const ChainComplexGF2& c);

int euler_characteristic(const ChainComplexGF2& c);

/// Degree-preserving basis bijection between two complexes, given by label.
/// Labels absent from the map correspond to the same label on the other side.
using BasisCorrespondence = std::map<std::string, std::string>;

struct DiffCell {
    int degree = 0;           // of the boundary map
    std::string row;          // label in complex a
    std::string col;          // label in complex a
    bool in_a = false;
    bool in_b = false;
};

struct MatrixDiff {
    std::map<int, std::vector<DiffCell>> by_degree;

    bool identical() const;
    bool degree_identical(int k) const;
    /// Set of column labels touched by differences in degree k.
    std::vector<std::string> differing_columns(int k) const;
    std::vector<std::string> differing_rows(int k) const;
};

/// Compares every boundary matrix entry under the correspondence. Throws
/// DimensionMismatch on different top degrees or basis sizes, and Error when
/// the correspondence is not a degree-preserving bijection.
MatrixDiff compare_matrices(const ChainComplexGF2& a, const ChainComplexGF2& b,
                            const BasisCorrespondence& correspondence = {});

} // namespace msflow::ej
