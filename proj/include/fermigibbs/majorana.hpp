#pragma once

#include <bit>
#include <map>
#include <utility>
#include <vector>

#include "fermigibbs/types.hpp"

namespace fg {

// Geometry of the fermionic lattice.  Majorana indices are 0-based throughout
// the library: Majorana k belongs to Dirac mode k / 2.
struct ModeLayout {
    int n_sites = 0;
    int lattice_dim = 1;
    std::vector<std::vector<int>> site_coords;
    std::vector<int> majorana_site;
    double r0 = 1.0;

    int n_modes() const { return static_cast<int>(majorana_site.size()) / 2; }
    int n_majoranas() const { return static_cast<int>(majorana_site.size()); }
    double distance(int site_a, int site_b) const;
    double majorana_distance(int j, int k) const {
        return distance(majorana_site[j], majorana_site[k]);
    }
    void validate() const;

    // Open chain with one Dirac mode per site.
    static ModeLayout chain(int n_modes, double r0 = 1.0);
    // Rectangular lattice with `modes_per_site` co-located Dirac modes per site.
    static ModeLayout lattice(const std::vector<int>& dims, int modes_per_site, double r0 = 1.0);
};

// Bit k set <=> gamma_k present.  Indices are kept in increasing order, so a
// bitmask is a canonical monomial.
using Monomial = std::uint32_t;

inline int degree(Monomial m) { return std::popcount(m); }
inline int parity(Monomial m) { return std::popcount(m) & 1; }
inline Monomial bit(int k) { return Monomial{1} << k; }

// gamma^a gamma^b = monomial_product_sign(a, b) * gamma^{a xor b}
int monomial_product_sign(Monomial a, Monomial b);

// Reduces an arbitrary word gamma_{i1} gamma_{i2} ... to (sign, canonical monomial).
std::pair<int, Monomial> canonicalize(const std::vector<int>& indices);

std::vector<int> monomial_indices(Monomial m);

class MajoranaPolynomial {
public:
    static constexpr double kPruneTol = 1e-14;

    explicit MajoranaPolynomial(int n_modes = 1) : n_modes_(n_modes) {}

    static MajoranaPolynomial identity(int n_modes, cd coeff = 1.0);
    static MajoranaPolynomial single(int n_modes, int k, cd coeff = 1.0);

    int n_modes() const { return n_modes_; }
    const std::map<Monomial, cd>& terms() const { return terms_; }

    void add(Monomial m, cd coeff);
    void add_word(const std::vector<int>& indices, cd coeff);
    MajoranaPolynomial& prune(double tol = kPruneTol);

    MajoranaPolynomial adjoint() const;
    bool is_even() const;
    bool is_odd() const;
    bool is_parity_homogeneous() const { return is_even() || is_odd(); }
    int max_index() const;
    // Drops every monomial whose indices are not all accepted by `keep`.
    template <typename Pred>
    MajoranaPolynomial filter(Pred keep) const {
        MajoranaPolynomial out(n_modes_);
        for (const auto& [m, c] : terms_) {
            bool ok = true;
            for (int k : monomial_indices(m)) ok = ok && keep(k);
            if (ok) out.terms_.emplace(m, c);
        }
        return out;
    }

    MajoranaPolynomial& operator+=(const MajoranaPolynomial& o);
    friend MajoranaPolynomial operator+(MajoranaPolynomial a, const MajoranaPolynomial& b) {
        return a += b;
    }
    friend MajoranaPolynomial operator*(const MajoranaPolynomial& a, const MajoranaPolynomial& b);
    friend MajoranaPolynomial operator*(cd s, MajoranaPolynomial p);

private:
    int n_modes_;
    std::map<Monomial, cd> terms_;
};

// Dense form of a monomial: M|x> = phase * (-1)^{popcount(x & zmask)} |x ^ xmask>,
// with Dirac mode j stored in bit (n-1-j) of the basis index (kron ordering).
struct PauliString {
    std::uint32_t xmask = 0;
    std::uint32_t zmask = 0;
    cd phase = 1.0;

    cd entry_factor(std::uint32_t x) const {
        return (std::popcount(x & zmask) & 1) ? -phase : phase;
    }
};

PauliString monomial_pauli(Monomial m, int n_modes);

std::vector<CMat> build_majorana_matrices(int n_modes, int max_modes = kMaxModes);
std::vector<CMat> build_majorana_matrices(const ModeLayout& layout, int max_modes = kMaxModes);

CMat monomial_matrix(Monomial m, int n_modes);
CMat polynomial_to_matrix(const MajoranaPolynomial& p, const std::vector<CMat>& gammas);
// Same as above without materialized gammas.
CMat polynomial_to_matrix(const MajoranaPolynomial& p);

int modes_from_dim(Eigen::Index dim);

// c_alpha = 2^{-n} Tr[(gamma^alpha)^dagger X], indexed by the monomial bitmask.
CVec monomial_vectorize(const CMat& X);
CMat monomial_devectorize(const CVec& c, int n_modes);
MajoranaPolynomial matrix_to_polynomial(const CMat& X, double tol = MajoranaPolynomial::kPruneTol);

template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& X) {
    using Plain = typename Derived::PlainObject;
    if (X.size() == 0) return 0.0;
    Eigen::BDCSVD<Plain> svd(X.derived());
    return svd.singularValues()(0);
}

double linear_combination_norm(const RVec& x, const RVec& y);

// i^n gamma_1 ... gamma_2n
CMat parity_operator(int n_modes);
std::pair<CMat, CMat> parity_split(const CMat& X);

}  // namespace fg
