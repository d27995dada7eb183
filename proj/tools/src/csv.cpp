#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dwal::tools {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string timeseries_csv(const Trajectory& traj, const std::string& manifest_hash) {
    std::ostringstream os;
    os << "# dwal timeseries v1\n";
    os << "# manifest=" << manifest_hash << "\n";
    os << "t,N_A,N_B,N_C,N_plus,N_minus\n";
    for (const auto& p : traj.samples) {
        os << format_double(p.t) << ',' << format_double(p.n_a) << ','
           << format_double(p.n_b) << ',' << format_double(p.n_c) << ','
           << format_double(p.n_plus) << ',' << format_double(p.n_minus) << '\n';
    }
    return os.str();
}

std::string spectrum_csv(const Spectrum& spec, const std::string& manifest_hash,
                         double omega_lo, double omega_hi) {
    std::ostringstream os;
    os << "# dwal spectrum v1\n";
    os << "# manifest=" << manifest_hash << "\n";
    os << "# t_snapshot=" << format_double(spec.t_snapshot) << "\n";
    os << "omega,raw,density\n";
    for (size_t j = 0; j < spec.omegas.size(); ++j) {
        if (spec.omegas[j] < omega_lo || spec.omegas[j] > omega_hi) continue;
        os << format_double(spec.omegas[j]) << ',' << format_double(spec.raw[j])
           << ',' << format_double(spec.density[j]) << '\n';
    }
    return os.str();
}

std::string scan_csv(const ScanResult& scan, const std::string& manifest_hash) {
    std::ostringstream os;
    os << "# dwal scan v1\n";
    os << "# manifest=" << manifest_hash << "\n";
    os << scan.axis << ",status,steady_N_A,beat_amplitude\n";
    for (const auto& p : scan.points) {
        os << format_double(p.axis_value) << ',';
        if (p.failed) {
            os << "failed,,";
        } else if (p.steady) {
            os << "steady," << format_double(p.steady_value) << ',';
        } else {
            os << "no_steady_state,," << format_double(p.beat_amplitude);
        }
        os << '\n';
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace dwal::tools
