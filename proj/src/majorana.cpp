#include "fermigibbs/majorana.hpp"

#include <cmath>
#include <numeric>

namespace fg {

double ModeLayout::distance(int a, int b) const {
    const auto& ca = site_coords.at(a);
    const auto& cb = site_coords.at(b);
    double s = 0.0;
    for (std::size_t d = 0; d < ca.size(); ++d) {
        const double diff = ca[d] - cb[d];
        s += diff * diff;
    }
    return std::sqrt(s);
}

void ModeLayout::validate() const {
    if (n_sites < 1) throw ValidationError("layout: n_sites must be positive");
    if (static_cast<int>(site_coords.size()) != n_sites)
        throw ValidationError("layout: site_coords size does not match n_sites");
    for (const auto& c : site_coords)
        if (static_cast<int>(c.size()) != lattice_dim)
            throw ValidationError("layout: coordinate dimension does not match lattice_dim");
    if (majorana_site.empty() || majorana_site.size() % 2 != 0)
        throw ValidationError("layout: need an even, nonzero number of Majorana modes");
    for (std::size_t k = 0; k < majorana_site.size(); ++k) {
        if (majorana_site[k] < 0 || majorana_site[k] >= n_sites)
            throw ValidationError("layout: Majorana " + std::to_string(k) + " maps outside the lattice");
        // Both Majoranas of a Dirac mode live on the same site.
        if (k % 2 == 1 && majorana_site[k] != majorana_site[k - 1])
            throw ValidationError("layout: Majorana pair of a Dirac mode split across sites");
    }
    if (!(r0 >= 0.0)) throw ValidationError("layout: r0 must be nonnegative");
}

ModeLayout ModeLayout::chain(int n_modes, double r0) {
    return lattice({n_modes}, 1, r0);
}

ModeLayout ModeLayout::lattice(const std::vector<int>& dims, int modes_per_site, double r0) {
    ModeLayout L;
    L.lattice_dim = static_cast<int>(dims.size());
    L.n_sites = 1;
    for (int d : dims) {
        if (d < 1) throw ValidationError("layout: lattice dims must be positive");
        L.n_sites *= d;
    }
    L.r0 = r0;
    for (int s = 0; s < L.n_sites; ++s) {
        std::vector<int> c(dims.size());
        int rest = s;
        for (int d = L.lattice_dim - 1; d >= 0; --d) {
            c[d] = rest % dims[d];
            rest /= dims[d];
        }
        L.site_coords.push_back(c);
        for (int m = 0; m < 2 * modes_per_site; ++m) L.majorana_site.push_back(s);
    }
    return L;
}

int monomial_product_sign(Monomial a, Monomial b) {
    // Move each gamma_j of b leftwards past every larger index present in a.
    int swaps = 0;
    for (Monomial rest = b; rest; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        const Monomial above = (j >= 31) ? 0 : ~((Monomial{2} << j) - 1);
        swaps += std::popcount(a & above);
    }
    return (swaps & 1) ? -1 : 1;
}

std::pair<int, Monomial> canonicalize(const std::vector<int>& indices) {
    int sign = 1;
    Monomial m = 0;
    for (int k : indices) {
        if (k < 0 || k >= 32) throw ValidationError("Majorana index out of range");
        sign *= monomial_product_sign(m, bit(k));
        m ^= bit(k);
    }
    return {sign, m};
}

std::vector<int> monomial_indices(Monomial m) {
    std::vector<int> out;
    for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

MajoranaPolynomial MajoranaPolynomial::identity(int n_modes, cd coeff) {
    MajoranaPolynomial p(n_modes);
    p.add(0, coeff);
    return p;
}

MajoranaPolynomial MajoranaPolynomial::single(int n_modes, int k, cd coeff) {
    MajoranaPolynomial p(n_modes);
    p.add(bit(k), coeff);
    return p;
}

void MajoranaPolynomial::add(Monomial m, cd coeff) {
    if (m >> (2 * n_modes_))
        throw ValidationError("monomial index exceeds 2n for n = " + std::to_string(n_modes_));
    auto& slot = terms_[m];
    slot += coeff;
    if (std::abs(slot) <= kPruneTol) terms_.erase(m);
}

void MajoranaPolynomial::add_word(const std::vector<int>& indices, cd coeff) {
    const auto [sign, m] = canonicalize(indices);
    add(m, coeff * static_cast<double>(sign));
}

MajoranaPolynomial& MajoranaPolynomial::prune(double tol) {
    std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
    return *this;
}

MajoranaPolynomial MajoranaPolynomial::adjoint() const {
    // (gamma_{i1}...gamma_{ik})^dagger reverses the word: sign (-1)^{k(k-1)/2}.
    MajoranaPolynomial out(n_modes_);
    for (const auto& [m, c] : terms_) {
        const int k = degree(m);
        const double s = ((k * (k - 1) / 2) & 1) ? -1.0 : 1.0;
        out.terms_.emplace(m, s * std::conj(c));
    }
    return out;
}

bool MajoranaPolynomial::is_even() const {
    for (const auto& kv : terms_)
        if (parity(kv.first)) return false;
    return true;
}

bool MajoranaPolynomial::is_odd() const {
    for (const auto& kv : terms_)
        if (!parity(kv.first)) return false;
    return true;
}

int MajoranaPolynomial::max_index() const {
    int mx = -1;
    for (const auto& kv : terms_)
        if (kv.first) mx = std::max(mx, 31 - std::countl_zero(kv.first));
    return mx;
}

MajoranaPolynomial& MajoranaPolynomial::operator+=(const MajoranaPolynomial& o) {
    n_modes_ = std::max(n_modes_, o.n_modes_);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

MajoranaPolynomial operator*(const MajoranaPolynomial& a, const MajoranaPolynomial& b) {
    MajoranaPolynomial out(std::max(a.n_modes_, b.n_modes_));
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            out.terms_[ma ^ mb] += static_cast<double>(monomial_product_sign(ma, mb)) * ca * cb;
    out.prune();
    return out;
}

MajoranaPolynomial operator*(cd s, MajoranaPolynomial p) {
    for (auto& kv : p.terms_) kv.second *= s;
    return p.prune();
}

PauliString monomial_pauli(Monomial m, int n_modes) {
    PauliString acc;
    for (int k : monomial_indices(m)) {
        const int mode = k / 2;
        const std::uint32_t site_bit = std::uint32_t{1} << (n_modes - 1 - mode);
        std::uint32_t string_mask = 0;
        for (int q = 0; q < mode; ++q) string_mask |= std::uint32_t{1} << (n_modes - 1 - q);
        PauliString g;
        g.xmask = site_bit;
        g.zmask = string_mask;
        if (k % 2 == 1) {
            // Y = i X Z on the flipped site
            g.zmask |= site_bit;
            g.phase = cd(0.0, 1.0);
        }
        // (p1 X^a1 Z^b1)(p2 X^a2 Z^b2) = p1 p2 (-1)^{|b1 & a2|} X^{a1^a2} Z^{b1^b2}
        const double s = (std::popcount(acc.zmask & g.xmask) & 1) ? -1.0 : 1.0;
        acc.phase *= g.phase * s;
        acc.xmask ^= g.xmask;
        acc.zmask ^= g.zmask;
    }
    return acc;
}

CMat monomial_matrix(Monomial m, int n_modes) {
    const Eigen::Index dim = Eigen::Index{1} << n_modes;
    const PauliString p = monomial_pauli(m, n_modes);
    CMat M = CMat::Zero(dim, dim);
    for (std::uint32_t x = 0; x < dim; ++x) M(x ^ p.xmask, x) = p.entry_factor(x);
    return M;
}

std::vector<CMat> build_majorana_matrices(int n_modes, int max_modes) {
    check_capacity(n_modes, max_modes);
    std::vector<CMat> g;
    for (int k = 0; k < 2 * n_modes; ++k) g.push_back(monomial_matrix(bit(k), n_modes));
    return g;
}

std::vector<CMat> build_majorana_matrices(const ModeLayout& layout, int max_modes) {
    layout.validate();
    return build_majorana_matrices(layout.n_modes(), max_modes);
}

CMat polynomial_to_matrix(const MajoranaPolynomial& p, const std::vector<CMat>& gammas) {
    if (gammas.empty()) throw ValidationError("polynomial_to_matrix: empty gamma set");
    const int n_maj = static_cast<int>(gammas.size());
    if (p.max_index() >= n_maj)
        throw ValidationError("polynomial_to_matrix: Majorana index " + std::to_string(p.max_index()) +
                              " out of range for " + std::to_string(n_maj) + " Majoranas");
    const Eigen::Index dim = gammas.front().rows();
    CMat out = CMat::Zero(dim, dim);
    for (const auto& [m, c] : p.terms()) {
        CMat prod = CMat::Identity(dim, dim);
        for (int k : monomial_indices(m)) prod = prod * gammas[k];
        out += c * prod;
    }
    return out;
}

CMat polynomial_to_matrix(const MajoranaPolynomial& p) {
    const int n = p.n_modes();
    if (p.max_index() >= 2 * n)
        throw ValidationError("polynomial_to_matrix: Majorana index out of range");
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMat out = CMat::Zero(dim, dim);
    for (const auto& [m, c] : p.terms()) {
        const PauliString ps = monomial_pauli(m, n);
        for (std::uint32_t x = 0; x < dim; ++x) out(x ^ ps.xmask, x) += c * ps.entry_factor(x);
    }
    return out;
}

int modes_from_dim(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if ((Eigen::Index{1} << n) != dim || n < 1)
        throw ValidationError("matrix dimension " + std::to_string(dim) + " is not 2^n with n >= 1");
    return n;
}

CVec monomial_vectorize(const CMat& X) {
    if (X.rows() != X.cols()) throw ValidationError("monomial_vectorize: matrix not square");
    const int n = modes_from_dim(X.rows());
    const Eigen::Index dim = X.rows();
    const Eigen::Index n_mono = Eigen::Index{1} << (2 * n);
    CVec c(n_mono);
    const double scale = 1.0 / static_cast<double>(dim);
    for (Eigen::Index a = 0; a < n_mono; ++a) {
        const PauliString ps = monomial_pauli(static_cast<Monomial>(a), n);
        cd s = 0.0;
        for (std::uint32_t x = 0; x < dim; ++x) s += std::conj(ps.entry_factor(x)) * X(x ^ ps.xmask, x);
        c(a) = s * scale;
    }
    return c;
}

CMat monomial_devectorize(const CVec& c, int n_modes) {
    const Eigen::Index dim = Eigen::Index{1} << n_modes;
    if (c.size() != dim * dim) throw ValidationError("monomial_devectorize: length is not 4^n");
    CMat X = CMat::Zero(dim, dim);
    for (Eigen::Index a = 0; a < c.size(); ++a) {
        if (c(a) == cd(0.0)) continue;
        const PauliString ps = monomial_pauli(static_cast<Monomial>(a), n_modes);
        for (std::uint32_t x = 0; x < dim; ++x) X(x ^ ps.xmask, x) += c(a) * ps.entry_factor(x);
    }
    return X;
}

MajoranaPolynomial matrix_to_polynomial(const CMat& X, double tol) {
    const CVec c = monomial_vectorize(X);
    MajoranaPolynomial p(modes_from_dim(X.rows()));
    for (Eigen::Index a = 0; a < c.size(); ++a)
        if (std::abs(c(a)) > tol) p.add(static_cast<Monomial>(a), c(a));
    return p;
}

double linear_combination_norm(const RVec& x, const RVec& y) {
    if (x.size() != y.size()) throw ValidationError("linear_combination_norm: length mismatch");
    const double xx = x.squaredNorm();
    const double yy = y.squaredNorm();
    const double xy = x.dot(y);
    const double cross = std::max(0.0, xx * yy - xy * xy);
    return std::sqrt(xx + yy + 2.0 * std::sqrt(cross));
}

CMat parity_operator(int n_modes) {
    const Monomial all = (Monomial{1} << (2 * n_modes)) - 1;
    cd in = 1.0;
    for (int k = 0; k < n_modes; ++k) in *= cd(0.0, 1.0);
    return in * monomial_matrix(all, n_modes);
}

std::pair<CMat, CMat> parity_split(const CMat& X) {
    const CMat P = parity_operator(modes_from_dim(X.rows()));
    const CMat conj = P * X * P;
    return {0.5 * (X + conj), 0.5 * (X - conj)};
}

}  // namespace fg
