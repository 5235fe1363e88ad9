#include "discord_scope/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "discord_scope/errors.hpp"

namespace dscope {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // drop negative zero
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::add(double x) {
    rows_.back().push_back(format_double(x));
    return *this;
}

CsvTable& CsvTable::add(long long x) {
    rows_.back().push_back(std::to_string(x));
    return *this;
}

CsvTable& CsvTable::add(bool x) {
    rows_.back().emplace_back(x ? "1" : "0");
    return *this;
}

CsvTable& CsvTable::add(std::string_view text) {
    rows_.back().emplace_back(text);
    return *this;
}

std::string CsvTable::str(std::string_view manifest_name) const {
    std::string out = "# manifest=";
    out += manifest_name;
    out += '\n';
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw Error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("rename to " + path.string() + " failed: " + ec.message());
    }
}

CsvTable landscape_csv(const Landscape& l) {
    CsvTable t({axis_name(l.request.x), axis_name(l.request.y), "visibility"});
    for (std::size_t j = 0; j < l.ys.size(); ++j)
        for (std::size_t i = 0; i < l.xs.size(); ++i)
            t.row().add(l.xs[i]).add(l.ys[j]).add(l.values[j * l.xs.size() + i]);
    return t;
}

CsvTable zeroline_csv(const ZeroLine& z) {
    CsvTable t({"beta", "degenerate", "alpha0_plus", "phi_a0_plus", "alpha0_minus",
                "phi_a0_minus", "tracked_valid", "alpha0_tracked", "phi_a0_tracked",
                "residual_visibility"});
    for (std::size_t i = 0; i < z.beta.size(); ++i) {
        const ZeroVisSolution& s = z.solutions[i];
        const bool deg = s.kind == ZeroVisSolution::Kind::DegenerateAllAlpha;
        t.row().add(z.beta[i]).add(deg);
        for (const ZeroPoint& p : s.branches) {
            if (deg)
                t.add("nan").add("nan");
            else
                t.add(p.alpha0).add(p.phi_a0);
        }
        t.add(static_cast<bool>(z.tracked_valid[i]));
        if (z.tracked_valid[i])
            t.add(z.alpha0_tracked[i]).add(z.phi_a0_tracked[i]);
        else
            t.add("nan").add("nan");
        t.add(z.residual[i]);
    }
    return t;
}

CsvTable f_curves_csv(const std::vector<FSample>& samples) {
    CsvTable t({"beta", "f_alpha", "f_phi", "alpha_masked", "phi_masked"});
    for (const FSample& s : samples)
        t.row().add(s.beta).add(s.f_alpha).add(s.f_phi).add(s.alpha_masked).add(s.phi_masked);
    return t;
}

CsvTable sweep_csv(const std::vector<SweepPoint>& sweep) {
    CsvTable t({"phi_d", "k_hat", "stderr", "k_exact", "n_shots"});
    for (const SweepPoint& p : sweep)
        t.row()
            .add(p.phi_d)
            .add(p.k_hat)
            .add(p.k_stderr)
            .add(p.k_exact)
            .add(static_cast<long long>(p.batch.n_shots));
    return t;
}

namespace {

nlohmann::ordered_json splitter_json(const BeamSplitterSetting& bs) {
    return {{"mix_angle", bs.mix_angle}, {"phi_r", bs.phi_r}, {"phi_t", bs.phi_t}};
}

}  // namespace

nlohmann::ordered_json to_json(const InterferometerConfig& c) {
    return {{"a_bs", splitter_json(c.a_bs)},
            {"phi_a", c.phi_a},
            {"b_bs", splitter_json(c.b_bs)},
            {"phi_b", c.phi_b},
            {"detector_bs", splitter_json(c.detector_bs)}};
}

nlohmann::ordered_json to_json(const QuantifierResult& q, bool with_samples) {
    nlohmann::ordered_json j;
    j["delta2_alpha"] = q.delta2_alpha;
    j["delta2_phi"] = q.delta2_phi;
    j["witness"] = q.witness;
    j["f_alpha_mean"] = q.f_alpha_mean;
    j["f_phi_mean"] = q.f_phi_mean;
    j["alpha_all_masked"] = q.alpha_all_masked;
    j["phi_all_masked"] = q.phi_all_masked;
    if (with_samples) {
        nlohmann::ordered_json beta = nlohmann::ordered_json::array(), fa = beta, fp = beta;
        for (const FSample& s : q.samples) {
            beta.push_back(s.beta);
            fa.push_back(s.alpha_masked ? nlohmann::ordered_json() : nlohmann::ordered_json(s.f_alpha));
            fp.push_back(s.phi_masked ? nlohmann::ordered_json() : nlohmann::ordered_json(s.f_phi));
        }
        j["f_curves"] = {{"beta", beta}, {"f_alpha", fa}, {"f_phi", fp}};
    }
    return j;
}

nlohmann::ordered_json to_json(const DiscordResult& d) {
    return {{"d_a", d.d_a},
            {"mutual_information", d.mutual_info},
            {"classical_correlation", d.j_a},
            {"conditional_entropy_min", d.conditional_entropy_min},
            {"optimal_basis", {{"theta", d.optimal_basis.axis.theta},
                               {"phi", d.optimal_basis.axis.phi}}}};
}

nlohmann::ordered_json to_json(const ShotBatch& b) {
    return {{"n_shots", b.n_shots},
            {"seed", b.seed},
            {"counts", {{"D1D1", b.counts[0]}, {"D1D2", b.counts[1]},
                        {"D2D1", b.counts[2]}, {"D2D2", b.counts[3]}}}};
}

nlohmann::ordered_json to_json(const FringeFit& f) {
    return {{"c_hat", f.c_hat},         {"a_re", f.a_hat.real()},
            {"a_im", f.a_hat.imag()},   {"a_mag_hat", f.a_mag_hat},
            {"a_phase_hat", f.a_phase_hat}, {"v_hat", f.v_hat},
            {"stderr_v", f.stderr_v},   {"residual_rms", f.residual_rms}};
}

nlohmann::ordered_json zeroline_summary(const ZeroLine& z) {
    nlohmann::ordered_json j;
    j["beta_samples"] = z.beta.size();
    j["verification_failures"] = z.verification_failures;
    nlohmann::ordered_json lines = nlohmann::ordered_json::array();
    for (double b : z.vertical_lines) lines.push_back({{"beta", b}, {"sin_beta", std::sin(b)}});
    j["vertical_lines"] = lines;
    j["degenerate_samples"] = z.degenerate_marks.size();
    j["jumps"] = z.jumps;
    nlohmann::ordered_json roots = nlohmann::ordered_json::array();
    for (const FixedAlphaRoot& r : z.fixed_alpha_roots)
        roots.push_back({{"beta0", r.beta0}, {"phi_a0", r.phi_a0}, {"residual", r.residual}});
    j["fixed_alpha_roots"] = roots;
    return j;
}

}  // namespace dscope
