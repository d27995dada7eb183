#include "dwal/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dwal/constants.hpp"

namespace dwal {

Spectrum spectrum_at(const Trajectory& traj, const ContinuumGrid& grid, double t) {
    bool nearest = false;
    const AmplitudeState& s = traj.snapshot_near(t, &nearest);
    if ((int)s.c.size() != grid.m_modes)
        throw std::invalid_argument("trajectory and grid disagree on mode count");

    Spectrum sp;
    sp.t_snapshot = s.t;
    sp.nearest_used = nearest;
    sp.omegas = grid.omegas;
    sp.raw.resize(grid.m_modes);
    sp.density.resize(grid.m_modes);
    for (int j = 0; j < grid.m_modes; ++j) {
        sp.raw[j] = std::norm(s.c[j]);
        sp.density[j] = sp.raw[j] / grid.epsilon;
    }
    return sp;
}

DecayFit fit_decay(const Trajectory& traj, double t0, double t1) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : traj.samples) {
        if (p.t < t0 || p.t > t1 || p.n_a <= 0.0) continue;
        const double x = p.t, y = std::log(p.n_a);
        pts.emplace_back(x, y);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = (double)pts.size();
    if (pts.size() < 2)
        throw std::invalid_argument("fit window contains fewer than two usable samples");

    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / n;

    double ss = 0.0;
    for (auto [x, y] : pts) {
        const double r = y - (icept + slope * x);
        ss += r * r;
    }

    DecayFit fit;
    fit.gamma = -slope;
    fit.residual = std::sqrt(ss / n);
    return fit;
}

std::optional<double> oscillation_frequency(const Trajectory& traj) {
    const size_t n = traj.samples.size();
    if (n < 8) return std::nullopt;

    // detrend N_A - N_B with a least-squares line so slow decay does not
    // push the oscillation off zero
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : traj.samples) {
        const double x = p.t, y = p.n_a - p.n_b;
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    const double b1 = (n * sxy - sx * sy) / denom;
    const double b0 = (sy - b1 * sx) / n;

    std::vector<double> sig(n), ts(n);
    double ptp_lo = 1e300, ptp_hi = -1e300;
    for (size_t i = 0; i < n; ++i) {
        ts[i] = traj.samples[i].t;
        sig[i] = traj.samples[i].n_a - traj.samples[i].n_b - (b0 + b1 * ts[i]);
        ptp_lo = std::min(ptp_lo, sig[i]);
        ptp_hi = std::max(ptp_hi, sig[i]);
    }
    const double ptp = ptp_hi - ptp_lo;
    if (ptp < 1e-12 * std::max(traj.n_total, 1e-300)) return std::nullopt;

    // zero crossings with a small deadband against numerical chatter
    const double thr = 5e-4 * ptp;
    std::vector<double> crossings;
    int armed = 0;  // sign of the last excursion beyond the deadband
    double prev_t = ts[0], prev_s = sig[0];
    for (size_t i = 0; i < n; ++i) {
        const double s = sig[i];
        if (s > thr) {
            if (armed < 0)
                crossings.push_back(prev_t + (ts[i] - prev_t) * (0.0 - prev_s) / (s - prev_s));
            armed = 1;
        } else if (s < -thr) {
            if (armed > 0)
                crossings.push_back(prev_t + (ts[i] - prev_t) * (0.0 - prev_s) / (s - prev_s));
            armed = -1;
        }
        prev_t = ts[i];
        prev_s = s;
    }

    if (crossings.size() < 5) return std::nullopt;
    const double spacing = (crossings.back() - crossings.front()) / (crossings.size() - 1);
    if (!(spacing > 0.0)) return std::nullopt;
    return pi / spacing;  // crossings are half a period apart
}

SteadyState detect_steady_state(const Trajectory& traj, double tail_fraction,
                                double threshold_frac) {
    if (traj.samples.size() < 4)
        throw std::invalid_argument("series too short for steady-state detection");
    const double t_first = traj.samples.front().t;
    const double t_last = traj.samples.back().t;
    if (t_last - t_first < 20.0)
        throw std::invalid_argument("steady-state detection needs at least 20 s of data");

    const double t_start = t_last - tail_fraction * (t_last - t_first);
    double lo = 1e300, hi = -1e300, sum = 0.0;
    size_t count = 0;
    for (const auto& p : traj.samples) {
        if (p.t < t_start) continue;
        lo = std::min(lo, p.n_a);
        hi = std::max(hi, p.n_a);
        sum += p.n_a;
        ++count;
    }

    SteadyState st;
    st.beat_amplitude = hi - lo;
    const double mean = sum / count;
    // The relevant scale is the tail's own level, not the total atom number:
    // after strong outcoupling the whole trap-A signal is a few percent of N,
    // and the residual beating near the coupling zero lives on that scale.
    if (st.beat_amplitude <= threshold_frac * mean) {
        st.found = true;
        st.value = mean;
    }
    return st;
}

namespace {

// Vertex abscissa of the parabola through three equally spaced points.
double parabolic_vertex(double xm, double dx, double ym, double yc, double yp) {
    const double denom = ym - 2.0 * yc + yp;
    if (denom == 0.0) return xm;
    const double shift = 0.5 * (ym - yp) / denom;
    return xm + shift * dx;
}

// Walk outward from peak index i until the density crosses `level`;
// returns the interpolated crossing position (clamped at the array edge or
// the first rising valley).
double half_crossing(const Spectrum& sp, int i, int dir, double level) {
    const auto& d = sp.density;
    const int n = (int)d.size();
    int k = i;
    while (true) {
        const int next = k + dir;
        if (next < 0 || next >= n) return sp.omegas[k];
        if (d[next] <= level) {
            const double f = (d[k] - level) / (d[k] - d[next]);
            return sp.omegas[k] + f * (sp.omegas[next] - sp.omegas[k]);
        }
        if (d[next] > d[k]) return sp.omegas[k];  // valley before the crossing
        k = next;
    }
}

} // namespace

SpectrumFeatures find_peaks_and_dip(const Spectrum& sp, double prominence_frac) {
    SpectrumFeatures out;
    const auto& d = sp.density;
    const int n = (int)d.size();
    if (n < 3) return out;

    const double dmax = *std::max_element(d.begin(), d.end());
    if (!(dmax > 0.0)) return out;
    const double floor = prominence_frac * dmax;

    // Topographic prominence: height above the lowest contour enclosing the
    // peak and no higher one.  Finite-pulse spectra ripple at the 2 pi / tau
    // scale; ripple crests have tiny prominence and drop out here, while the
    // physical features (edge peak, narrow peak, broad peak) survive.
    struct Cand { int idx; double omega, height, prominence; };
    std::vector<Cand> cands;
    for (int i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) ? d[i] > d[i + 1] : d[i] > d[i - 1];
        const bool right_ok = (i == n - 1) ? d[i] > d[i - 1] : d[i] >= d[i + 1];
        if (!(left_ok && right_ok)) continue;

        // base on each side: minimum between the peak and the nearest higher
        // terrain; a side with nothing traversed (array edge) does not bind
        double left_base = -std::numeric_limits<double>::infinity();
        double right_base = -std::numeric_limits<double>::infinity();
        for (int j = i - 1; j >= 0; --j) {
            if (left_base == -std::numeric_limits<double>::infinity()) left_base = d[j];
            else left_base = std::min(left_base, d[j]);
            if (d[j] > d[i]) break;
        }
        for (int j = i + 1; j < n; ++j) {
            if (right_base == -std::numeric_limits<double>::infinity()) right_base = d[j];
            else right_base = std::min(right_base, d[j]);
            if (d[j] > d[i]) break;
        }
        const double prominence = d[i] - std::max(left_base, right_base);
        if (prominence < floor) continue;

        double omega = sp.omegas[i];
        if (i > 0 && i < n - 1)
            omega = parabolic_vertex(sp.omegas[i], sp.omegas[1] - sp.omegas[0],
                                     d[i - 1], d[i], d[i + 1]);
        cands.push_back({i, omega, d[i], prominence});
    }
    if (cands.empty()) return out;

    for (const auto& c : cands) {
        Peak p;
        p.omega = c.omega;
        p.height = c.height;
        const double half = 0.5 * c.height;
        const double wl = sp.omegas[c.idx] - half_crossing(sp, c.idx, -1, half);
        const double wr = half_crossing(sp, c.idx, +1, half) - sp.omegas[c.idx];
        const double lo = c.omega - 3.0 * std::max(wl, 0.0);
        const double hi = c.omega + 3.0 * std::max(wr, 0.0);
        double area = 0.0;
        for (int j = 0; j < n; ++j)
            if (sp.omegas[j] >= lo && sp.omegas[j] <= hi) area += sp.raw[j];
        p.area = area;
        out.peaks.push_back(p);
    }
    std::sort(out.peaks.begin(), out.peaks.end(),
              [](const Peak& x, const Peak& y) { return x.height > y.height; });

    if (cands.size() >= 2) {
        // Deepest minimum between the outermost accepted peaks.  For a plain
        // doublet this is the region between the two tallest peaks; in the
        // strong-coupling spectra it also covers the dark line, which sits
        // below the narrow peak rather than inside the doublet bracket.
        int i1 = cands.front().idx, i2 = cands.back().idx;
        if (i1 > i2) std::swap(i1, i2);
        if (i2 - i1 >= 2) {
            int imin = i1 + 1;
            for (int i = i1 + 1; i < i2; ++i)
                if (d[i] < d[imin]) imin = i;

            Dip dip;
            dip.depth = d[imin];
            dip.omega = (imin > 0 && imin < n - 1)
                            ? parabolic_vertex(sp.omegas[imin], sp.omegas[1] - sp.omegas[0],
                                               d[imin - 1], d[imin], d[imin + 1])
                            : sp.omegas[imin];

            // width of the region below twice the dip depth, bounded by the
            // bracketing peaks
            const double level = 2.0 * dip.depth;
            double wl = sp.omegas[i1], wr = sp.omegas[i2];
            for (int i = imin; i > i1; --i)
                if (d[i] > level) {
                    const double f = (d[i] - level) / (d[i] - d[i + 1]);
                    wl = sp.omegas[i] + f * (sp.omegas[i + 1] - sp.omegas[i]);
                    break;
                }
            for (int i = imin; i < i2; ++i)
                if (d[i] > level) {
                    const double f = (d[i] - level) / (d[i] - d[i - 1]);
                    wr = sp.omegas[i] + f * (sp.omegas[i - 1] - sp.omegas[i]);
                    break;
                }
            dip.width = wr - wl;
            out.dip = dip;
        }
    }
    return out;
}

} // namespace dwal
