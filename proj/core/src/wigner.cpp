#include "qtsim/wigner.hpp"
#include "qtsim/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qtsim {

double DensityMatrixGrid::trace_times_dx() const {
    double s = 0.0;
    for (int j = 0; j < grid.n_points; ++j) s += std::real(at(j, j));
    return s * grid.dx;
}

namespace {

/// RAII FFTW complex buffer + plan pair for repeated same-size transforms.
class Fft {
public:
    Fft(int n, int sign) : n_(n) {
        in_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        out_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        plan_ = fftw_plan_dft_1d(n, in_, out_, sign, FFTW_ESTIMATE);
    }
    ~Fft() {
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    cdouble* in() { return reinterpret_cast<cdouble*>(in_); }
    const cdouble* out() const { return reinterpret_cast<const cdouble*>(out_); }
    void execute() { fftw_execute(plan_); }
    int size() const { return n_; }

private:
    int n_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan plan_;
};

/// Trigonometric upsampling of psi to dx/2 spacing: 2n samples over the
/// (periodic) box, of which indices 0..2n-2 are used. Original nodes map
/// to even indices and are reproduced to roundoff.
std::vector<cdouble> upsample2x(const PureState& psi) {
    const int n = psi.grid.n_points;
    Fft fwd(n, FFTW_FORWARD), bwd(2 * n, FFTW_BACKWARD);
    std::copy(psi.amplitudes.begin(), psi.amplitudes.end(), fwd.in());
    fwd.execute();

    std::fill(bwd.in(), bwd.in() + 2 * n, cdouble{0.0, 0.0});
    const int half = n / 2;
    for (int f = 0; f < n; ++f) {
        // signed frequency of input bin f
        int sf = (f <= (n - 1) / 2) ? f : f - n;
        if (n % 2 == 0 && f == half) {
            // split the Nyquist bin symmetrically
            bwd.in()[half] += 0.5 * fwd.out()[f];
            bwd.in()[2 * n - half] += 0.5 * fwd.out()[f];
        } else {
            bwd.in()[(sf + 2 * n) % (2 * n)] = fwd.out()[f];
        }
    }
    bwd.execute();
    std::vector<cdouble> aux(2 * n);
    const double scale = 1.0 / n;
    for (int i = 0; i < 2 * n; ++i) aux[i] = bwd.out()[i] * scale;
    return aux;
}

struct RowComputer {
    const SpatialGrid& grid;
    const MomentumGrid& kg;
    Fft fft;
    std::vector<cdouble> twiddle_pos, twiddle_neg; // e^{-i k_min m dx}, m >= 0 / m < 0

    RowComputer(const SpatialGrid& g, const MomentumGrid& kg_)
        : grid(g), kg(kg_), fft(g.n_points, FFTW_FORWARD) {
        const int m_max = (g.n_points - 1) / 2;
        twiddle_pos.resize(m_max + 1);
        twiddle_neg.resize(m_max + 1);
        for (int m = 0; m <= m_max; ++m) {
            twiddle_pos[m] = std::polar(1.0, -kg.k_min * m * g.dx);
            twiddle_neg[m] = std::conj(twiddle_pos[m]);
        }
    }

    /// Accumulate weight * F_row(s) into dst; returns the imaginary
    /// residue of this row (before weighting).
    double accumulate(const std::vector<cdouble>& aux, int s, double weight,
                      double* dst) {
        const int n = grid.n_points;
        const int top = 2 * n - 2;
        const int m_cap = std::min({(n - 1) / 2, s, top - s});
        std::fill(fft.in(), fft.in() + n, cdouble{0.0, 0.0});
        fft.in()[0] = aux[s] * std::conj(aux[s]);
        for (int m = 1; m <= m_cap; ++m) {
            const cdouble c = aux[s + m] * std::conj(aux[s - m]);
            fft.in()[m] = c * twiddle_pos[m];
            fft.in()[n - m] = std::conj(c) * twiddle_neg[m];
        }
        fft.execute();
        const double pref = grid.dx / (2.0 * std::numbers::pi);
        double resid = 0.0;
        for (int ik = 0; ik < n; ++ik) {
            const cdouble v = fft.out()[ik];
            resid = std::max(resid, std::abs(v.imag()) * pref);
            dst[ik] += weight * pref * v.real();
        }
        return resid;
    }
};

void check_conjugate(const SpatialGrid& g, const MomentumGrid& kg) {
    const MomentumGrid expect = conjugate_momentum_grid(g);
    if (kg.n_points != expect.n_points ||
        std::abs(kg.dk - expect.dk) > 1e-12 * expect.dk ||
        std::abs(kg.k_min - expect.k_min) > 1e-12 * std::abs(expect.k_min))
        throw ShapeError("wigner transform: momentum grid is not conjugate "
                         "to the state's spatial grid");
}

void accumulate_state(RowComputer& rc, WignerField& f, const PureState& psi,
                      double weight) {
    const std::vector<cdouble> aux = upsample2x(psi);
    const int nrows = f.n_rows();
    for (int r = 0; r < nrows; ++r) {
        const int s = (f.rows == WignerRows::with_midpoints)
                          ? r
                          : 2 * r * f.row_stride;
        const double resid =
            rc.accumulate(aux, s, weight, &f.values[size_t(r) * f.kgrid.n_points]);
        f.max_imag_residue = std::max(f.max_imag_residue, resid);
    }
}

void check_stride(WignerRows rows, int row_stride) {
    if (row_stride < 1 ||
        (rows == WignerRows::with_midpoints && row_stride != 1))
        throw ShapeError("wigner transform: invalid row stride");
}

} // namespace

WignerField wigner_from_state(const PureState& psi, const MomentumGrid& kg,
                              WignerRows rows, int row_stride) {
    check_conjugate(psi.grid, kg);
    check_stride(rows, row_stride);
    WignerField f;
    f.grid = psi.grid;
    f.kgrid = kg;
    f.rows = rows;
    f.row_stride = row_stride;
    f.values.assign(size_t(f.n_rows()) * kg.n_points, 0.0);
    RowComputer rc(psi.grid, kg);
    accumulate_state(rc, f, psi, 1.0);
    return f;
}

WignerField wigner_from_ensemble(const SignedEnsemble& e, const MomentumGrid& kg,
                                 WignerRows rows, int row_stride) {
    if (e.terms.empty())
        throw ShapeError("wigner_from_ensemble: empty ensemble");
    const SpatialGrid& g = e.terms.front().state.grid;
    check_conjugate(g, kg);
    check_stride(rows, row_stride);
    WignerField f;
    f.grid = g;
    f.kgrid = kg;
    f.rows = rows;
    f.row_stride = row_stride;
    f.values.assign(size_t(f.n_rows()) * kg.n_points, 0.0);
    RowComputer rc(g, kg);
    for (const auto& t : e.terms) {
        if (t.state.grid != g)
            throw ShapeError("wigner_from_ensemble: terms on mixed grids");
        accumulate_state(rc, f, t.state, t.weight);
    }
    return f;
}

DensityMatrixGrid density_matrix_from_wigner(const WignerField& f) {
    if (f.rows != WignerRows::with_midpoints)
        throw ShapeError("density_matrix_from_wigner: field lacks midpoint rows");
    const int n = f.grid.n_points;
    DensityMatrixGrid rho;
    rho.grid = f.grid;
    rho.values.assign(size_t(n) * n, cdouble{0.0, 0.0});

    Fft bwd(n, FFTW_BACKWARD);
    std::vector<cdouble> phase(2 * n - 1); // e^{i k_min d dx}, d = idx - (n-1)
    for (int i = 0; i < 2 * n - 1; ++i)
        phase[i] = std::polar(1.0, f.kgrid.k_min * (i - (n - 1)) * f.grid.dx);

    for (int s = 0; s <= 2 * n - 2; ++s) {
        for (int ik = 0; ik < n; ++ik)
            bwd.in()[ik] = cdouble{f.at(s, ik), 0.0};
        bwd.execute();
        const int a_lo = std::max(0, s - (n - 1));
        const int a_hi = std::min(n - 1, s);
        const int m_cap = std::min({(n - 1) / 2, s, 2 * n - 2 - s});
        for (int a = a_lo; a <= a_hi; ++a) {
            const int b = s - a;
            const int d = a - b;
            // offsets outside the forward window were never stored; reading
            // them back would alias near-diagonal data, so they stay zero
            if (std::abs(d) > m_cap) continue;
            rho.values[size_t(a) * n + b] =
                f.kgrid.dk * phase[d + (n - 1)] * bwd.out()[(d % n + n) % n];
        }
    }
    return rho;
}

ChargeDensity marginal_position(const WignerField& f) {
    if (f.row_stride != 1)
        throw ShapeError("marginal_position: field rows are decimated");
    const int n = f.grid.n_points;
    ChargeDensity q;
    q.grid = f.grid;
    q.values.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double* row = &f.values[size_t(f.node_row(j)) * f.kgrid.n_points];
        double s = 0.0;
        for (int ik = 0; ik < f.kgrid.n_points; ++ik) s += row[ik];
        q.values[j] = s * f.kgrid.dk;
    }
    return q;
}

std::vector<double> marginal_momentum(const WignerField& f) {
    if (f.row_stride != 1)
        throw ShapeError("marginal_momentum: field rows are decimated");
    const int n = f.grid.n_points;
    std::vector<double> p(f.kgrid.n_points, 0.0);
    for (int j = 0; j < n; ++j) {
        const double* row = &f.values[size_t(f.node_row(j)) * f.kgrid.n_points];
        for (int ik = 0; ik < f.kgrid.n_points; ++ik) p[ik] += row[ik];
    }
    for (auto& v : p) v *= f.grid.dx;
    return p;
}

} // namespace qtsim
