#include "msflow/ej_complex.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace msflow::ej {

std::string BasisElement::label() const {
    switch (flavor) {
    case Flavor::minus:
        return origin + "-";
    case Flavor::plus:
        return origin + "+";
    case Flavor::plain:
        break;
    }
    return origin;
}

ChainComplexGF2::ChainComplexGF2(int top_degree, std::vector<std::vector<BasisElement>> bases,
                                 std::vector<gf2::MatrixGF2> boundaries)
    : top_degree_(top_degree), bases_(std::move(bases)), boundaries_(std::move(boundaries)) {
    const auto degrees = static_cast<std::size_t>(top_degree_ + 1);
    if (top_degree_ < 0 || bases_.size() != degrees || boundaries_.size() != degrees) {
        throw DimensionMismatch("complex needs one basis and one boundary per degree 0.." +
                                std::to_string(top_degree_));
    }
    for (int k = 0; k <= top_degree_; ++k) {
        const auto& d = boundaries_[static_cast<std::size_t>(k)];
        const std::size_t rows = k == 0 ? 0 : bases_[static_cast<std::size_t>(k - 1)].size();
        if (d.rows() != rows || d.cols() != bases_[static_cast<std::size_t>(k)].size()) {
            throw DimensionMismatch("boundary " + std::to_string(k) + " has shape " + d.shape() + ", expected " +
                                    std::to_string(rows) + "x" +
                                    std::to_string(bases_[static_cast<std::size_t>(k)].size()));
        }
    }
}

const std::vector<BasisElement>& ChainComplexGF2::basis(int k) const {
    if (k < 0 || k > top_degree_) {
        throw std::out_of_range("degree " + std::to_string(k) + " outside complex");
    }
    return bases_[static_cast<std::size_t>(k)];
}

const gf2::MatrixGF2& ChainComplexGF2::boundary(int k) const {
    if (k < 0 || k > top_degree_) {
        throw std::out_of_range("degree " + std::to_string(k) + " outside complex");
    }
    return boundaries_[static_cast<std::size_t>(k)];
}

std::size_t ChainComplexGF2::find(int k, const std::string& label) const {
    const auto& b = basis(k);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].label() == label) {
            return i;
        }
    }
    return npos;
}

ChainComplexGF2 build_complex(const flow::FlowSystem& s) {
    flow::require_valid(s);
    const int n = s.dimension;
    std::vector<std::vector<BasisElement>> bases(static_cast<std::size_t>(n + 1));

    for (const auto& e : s.elements) {
        if (e.is_rest()) {
            bases[static_cast<std::size_t>(e.index)].push_back({e.name, Flavor::plain, e.index});
        }
    }
    for (const auto& e : s.elements) {
        if (e.is_orbit()) {
            bases[static_cast<std::size_t>(e.index)].push_back({e.name, Flavor::minus, e.index});
        }
    }
    for (const auto& e : s.elements) {
        if (e.is_orbit()) {
            bases[static_cast<std::size_t>(e.index + 1)].push_back({e.name, Flavor::plus, e.index + 1});
        }
    }

    std::vector<gf2::MatrixGF2> boundaries;
    boundaries.reserve(bases.size());
    boundaries.emplace_back(0, bases[0].size());
    for (std::size_t k = 1; k < bases.size(); ++k) {
        const auto& cols = bases[k];
        const auto& rows = bases[k - 1];
        gf2::MatrixGF2 d(rows.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (cols[c].origin == rows[r].origin) {
                    continue;
                }
                if (s.connections.count(cols[c].origin, rows[r].origin) % 2 == 1) {
                    d.set(r, c, true);
                }
            }
        }
        boundaries.push_back(std::move(d));
    }
    return ChainComplexGF2(n, std::move(bases), std::move(boundaries));
}

std::vector<D2Violation> check_d2(const ChainComplexGF2& c) {
    std::vector<D2Violation> out;
    for (int k = 2; k <= c.top_degree(); ++k) {
        const auto product = gf2::multiply(c.boundary(k - 1), c.boundary(k));
        for (std::size_t col = 0; col < product.cols(); ++col) {
            for (std::size_t row = 0; row < product.rows(); ++row) {
                if (product.get(row, col)) {
                    out.push_back({k, c.basis(k)[col], c.basis(k - 2)[row]});
                }
            }
        }
    }
    return out;
}

NotAChainComplex::NotAChainComplex(std::vector<D2Violation> violations)
    : Error("boundary does not square to zero (" + std::to_string(violations.size()) + " nonzero entries)"),
      violations_(std::move(violations)) {}

std::vector<int> betti(const ChainComplexGF2& c) {
    auto violations = check_d2(c);
    if (!violations.empty()) {
        throw NotAChainComplex(std::move(violations));
    }
    std::vector<int> out;
    for (int k = 0; k <= c.top_degree(); ++k) {
        const auto dim = static_cast<int>(c.basis(k).size());
        const auto rank_k = static_cast<int>(gf2::rank(c.boundary(k)));
        const auto rank_up = k < c.top_degree() ? static_cast<int>(gf2::rank(c.boundary(k + 1))) : 0;
        out.push_back(dim - rank_k - rank_up);
    }
    return out;
}

int euler_characteristic(const ChainComplexGF2& c) {
    int chi = 0;
    for (int k = 0; k <= c.top_degree(); ++k) {
        const auto size = static_cast<int>(c.basis(k).size());
        chi += (k % 2 == 0) ? size : -size;
    }
    return chi;
}

bool MatrixDiff::identical() const {
    return std::all_of(by_degree.begin(), by_degree.end(), [](const auto& kv) { return kv.second.empty(); });
}

bool MatrixDiff::degree_identical(int k) const {
    const auto it = by_degree.find(k);
    return it == by_degree.end() || it->second.empty();
}

std::vector<std::string> MatrixDiff::differing_columns(int k) const {
    std::vector<std::string> out;
    if (const auto it = by_degree.find(k); it != by_degree.end()) {
        for (const auto& cell : it->second) {
            if (std::find(out.begin(), out.end(), cell.col) == out.end()) {
                out.push_back(cell.col);
            }
        }
    }
    return out;
}

std::vector<std::string> MatrixDiff::differing_rows(int k) const {
    std::vector<std::string> out;
    if (const auto it = by_degree.find(k); it != by_degree.end()) {
        for (const auto& cell : it->second) {
            if (std::find(out.begin(), out.end(), cell.row) == out.end()) {
                out.push_back(cell.row);
            }
        }
    }
    return out;
}

namespace {

// For each degree, position in b of each basis element of a.
std::vector<std::vector<std::size_t>> resolve_bijection(const ChainComplexGF2& a, const ChainComplexGF2& b,
                                                        const BasisCorrespondence& correspondence) {
    std::set<std::string> used_keys;
    std::vector<std::vector<std::size_t>> maps;
    for (int k = 0; k <= a.top_degree(); ++k) {
        const auto& basis_a = a.basis(k);
        std::vector<std::size_t> map(basis_a.size());
        std::vector<bool> hit(b.basis(k).size(), false);
        for (std::size_t i = 0; i < basis_a.size(); ++i) {
            const std::string label = basis_a[i].label();
            const auto it = correspondence.find(label);
            const std::string target = it == correspondence.end() ? label : it->second;
            if (it != correspondence.end()) {
                used_keys.insert(label);
            }
            const std::size_t j = b.find(k, target);
            if (j == ChainComplexGF2::npos) {
                throw Error("correspondence is not degree-preserving: " + label + " (degree " + std::to_string(k) +
                            ") has no partner '" + target + "' in degree " + std::to_string(k));
            }
            if (hit[j]) {
                throw Error("correspondence is not a bijection: '" + target + "' hit twice in degree " +
                            std::to_string(k));
            }
            hit[j] = true;
            map[i] = j;
        }
        maps.push_back(std::move(map));
    }
    for (const auto& [from, to] : correspondence) {
        if (!used_keys.count(from)) {
            throw Error("correspondence names '" + from + "', which is not a basis element");
        }
    }
    return maps;
}

} // namespace

MatrixDiff compare_matrices(const ChainComplexGF2& a, const ChainComplexGF2& b,
                            const BasisCorrespondence& correspondence) {
    if (a.top_degree() != b.top_degree()) {
        throw DimensionMismatch("complexes have top degrees " + std::to_string(a.top_degree()) + " and " +
                                std::to_string(b.top_degree()));
    }
    for (int k = 0; k <= a.top_degree(); ++k) {
        if (a.basis(k).size() != b.basis(k).size()) {
            throw DimensionMismatch("degree " + std::to_string(k) + " bases have sizes " +
                                    std::to_string(a.basis(k).size()) + " and " + std::to_string(b.basis(k).size()));
        }
    }
    const auto maps = resolve_bijection(a, b, correspondence);

    MatrixDiff diff;
    for (int k = 1; k <= a.top_degree(); ++k) {
        auto& cells = diff.by_degree[k];
        const auto& da = a.boundary(k);
        const auto& db = b.boundary(k);
        const auto& rows = maps[static_cast<std::size_t>(k - 1)];
        const auto& cols = maps[static_cast<std::size_t>(k)];
        for (std::size_t c = 0; c < da.cols(); ++c) {
            for (std::size_t r = 0; r < da.rows(); ++r) {
                const bool va = da.get(r, c);
                const bool vb = db.get(rows[r], cols[c]);
                if (va != vb) {
                    cells.push_back({k, a.basis(k - 1)[r].label(), a.basis(k)[c].label(), va, vb});
                }
            }
        }
    }
    return diff;
}

} // namespace msflow::ej
