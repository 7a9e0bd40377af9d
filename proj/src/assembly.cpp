#include "casimir/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "casimir/constants.hpp"
#include "casimir/de_positive.hpp"

namespace casimir {

void ModelSpec::validate() const {
    if (!(temperature_k > 0.0)) throw std::invalid_argument("ModelSpec: T must be positive");
    if (prescription == Prescription::perfect_conductor) return;  // wp, gamma ignored
    if (!(omega_p1_ev > 0.0) || !(omega_p2_ev > 0.0))
        throw std::invalid_argument("ModelSpec: omega_p must be positive");
    if (prescription == Prescription::drude && !(gamma_ev > 0.0))
        throw std::invalid_argument("ModelSpec: Drude prescription requires gamma > 0");
}

PermittivityModel ModelSpec::permittivity(int sphere) const {
    const double wp = sphere == 1 ? omega_p1_ev : omega_p2_ev;
    switch (prescription) {
        case Prescription::drude: return PermittivityModel::drude(wp, gamma_ev);
        case Prescription::plasma: return PermittivityModel::plasma(wp);
        case Prescription::perfect_conductor: return PermittivityModel::perfect_conductor();
    }
    throw std::logic_error("ModelSpec: unknown prescription");
}

std::pair<double, double> weights(double a_um, const ModelSpec& spec,
                                  const LifshitzOptions& opts) {
    spec.validate();
    const LifshitzPlanar pp(spec.permittivity(1), spec.permittivity(2), spec.temperature_k,
                            opts);
    const double f0 = pp.free_energy(a_um, {MatsubaraPart::zero_only}).value;
    const double fp = pp.free_energy(a_um, {MatsubaraPart::positive_only}).value;
    const double p0 = pp.pressure(a_um, {MatsubaraPart::zero_only}).value;
    const double pp_ = pp.pressure(a_um, {MatsubaraPart::positive_only}).value;
    return {f0 / (f0 + fp), p0 / (p0 + pp_)};
}

std::pair<double, double> ideal_pfa_norms(const SphereGeometry& g) {
    const double rt = g.effective_radius();
    const double a = g.gap_um;
    const double pi3 = pi * pi * pi;
    return {-pi3 * hbar_c * rt / (360.0 * a * a * a),
            pi3 * hbar_c * rt / (120.0 * a * a * a * a)};
}

namespace {

// classical (n = 0) force and gradient for the requested model
struct ClassicalPart {
    double force = 0.0, gradient = 0.0;
    bool pc_substituted = false;
};

ClassicalPart classical_part(const SphereGeometry& g, const ModelSpec& spec,
                             const DeviationOptions& opt) {
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(g);
    ClassicalPart out;
    switch (spec.prescription) {
        case Prescription::drude: {
            const ClassicalResult r =
                spec.boundary == Boundary::grounded
                    ? dirichlet_classical(bg, spec.temperature_k, opt.classical)
                    : drude_isolated_classical(bg, spec.temperature_k, opt.classical);
            out.force = r.force;
            out.gradient = r.force_gradient;
            return out;
        }
        case Prescription::perfect_conductor: {
            const PcClassicalResult r =
                pc_classical(bg, spec.temperature_k, spec.boundary, opt.classical);
            out.force = r.total.force;
            out.gradient = r.total.force_gradient;
            return out;
        }
        case Prescription::plasma: {
            TruncationPlan plan =
                opt.plan ? *opt.plan : TruncationPlan::automatic(g);
            bool use_exact = spec.te_path != ModelSpec::TePath::pc_substitute;
            if (spec.te_path == ModelSpec::TePath::automatic &&
                std::max(plan.n1, plan.n2) > opt.max_exact_te_n1)
                use_exact = false;
            if (use_exact) {
                const PlasmaClassicalResult r = plasma_classical_total(
                    g, spec.temperature_k, spec.omega_p1_ev, spec.omega_p2_ev, spec.boundary,
                    plan, opt.te_plasma, opt.classical);
                out.force = r.total.force;
                out.gradient = r.total.force_gradient;
            } else {
                // spherical-basis TE replaced by the bispherical Neumann term;
                // a percent-level approximation on beta below 300 nm, vanishing above
                const ClassicalResult tm =
                    spec.boundary == Boundary::grounded
                        ? dirichlet_classical(bg, spec.temperature_k, opt.classical)
                        : drude_isolated_classical(bg, spec.temperature_k, opt.classical);
                const ClassicalResult te =
                    neumann_classical(bg, spec.temperature_k, opt.classical);
                out.force = tm.force + te.force;
                out.gradient = tm.force_gradient + te.force_gradient;
                out.pc_substituted = true;
            }
            return out;
        }
    }
    throw std::logic_error("classical_part: unknown prescription");
}

}  // namespace

DeviationResult deviation(const SphereGeometry& g, const ModelSpec& spec,
                          const DeviationOptions& opt) {
    spec.validate();
    if (spec.prescription == Prescription::perfect_conductor)
        throw std::invalid_argument(
            "deviation: no derivative-expansion tables for perfect conductors; "
            "use the classical interface instead");

    DeviationResult out;
    out.a_um = g.gap_um;
    const double rt = g.effective_radius();
    const double a = g.gap_um;
    const double x = g.x();

    const LifshitzPlanar pp(spec.permittivity(1), spec.permittivity(2), spec.temperature_k,
                            opt.lifshitz);
    const double fe0 = pp.free_energy(a, {MatsubaraPart::zero_only}).value;
    const double fep = pp.free_energy(a, {MatsubaraPart::positive_only}).value;
    const double pr0 = pp.pressure(a, {MatsubaraPart::zero_only}).value;
    const double prp = pp.pressure(a, {MatsubaraPart::positive_only}).value;

    const double f_pfa_n0 = 2.0 * pi * rt * fe0;
    const double f_pfa_np = 2.0 * pi * rt * fep;
    out.f_pfa = f_pfa_n0 + f_pfa_np;
    const double fp_pfa_n0 = -2.0 * pi * rt * pr0;
    const double fp_pfa_np = -2.0 * pi * rt * prp;
    out.fp_pfa = fp_pfa_n0 + fp_pfa_np;

    out.w = f_pfa_n0 / out.f_pfa;
    out.w_tilde = fp_pfa_n0 / out.fp_pfa;

    const auto [beta_np, beta_t_np] = beta_positive(a, g.u(), spec.prescription);
    out.beta_npos = beta_np;
    out.beta_tilde_npos = beta_t_np;
    out.f_npos = f_pfa_np * (1.0 + beta_np * x);
    const double fp_npos = fp_pfa_np * (1.0 + beta_t_np * x);

    const ClassicalPart cl = classical_part(g, spec, opt);
    out.te_pc_substituted = cl.pc_substituted;
    out.f_n0 = cl.force;
    out.beta_n0 = (rt / a) * (cl.force / f_pfa_n0 - 1.0);
    out.beta_tilde_n0 = (rt / a) * (cl.gradient / fp_pfa_n0 - 1.0);

    out.f = out.f_n0 + out.f_npos;
    out.fp = cl.gradient + fp_npos;
    out.beta = (rt / a) * (out.f / out.f_pfa - 1.0);
    out.beta_tilde = (rt / a) * (out.fp / out.fp_pfa - 1.0);

    // decomposition identities, exact up to rounding
    const double id1 = out.w * out.beta_n0 + (1.0 - out.w) * out.beta_npos;
    const double id2 =
        out.w_tilde * out.beta_tilde_n0 + (1.0 - out.w_tilde) * out.beta_tilde_npos;
    if (std::abs(id1 - out.beta) > opt.identity_tol ||
        std::abs(id2 - out.beta_tilde) > opt.identity_tol)
        throw std::runtime_error("deviation: decomposition identity violated");

    const auto [f_id, fp_id] = ideal_pfa_norms(g);
    out.f_over_ideal = out.f / f_id;
    out.fp_over_ideal = out.fp / fp_id;
    return out;
}

std::vector<DeviationResult> sweep(const SweepConfig& cfg) {
    std::vector<double> gaps = cfg.gaps_um;
    std::sort(gaps.begin(), gaps.end());
    std::vector<DeviationResult> rows;
    rows.reserve(gaps.size());
    for (const double a : gaps) {
        try {
            rows.push_back(
                deviation(SphereGeometry(cfg.r1_um, cfg.r2_um, a), cfg.model, cfg.options));
        } catch (const std::exception& e) {
            DeviationResult bad;
            bad.a_um = a;
            bad.error = e.what();
            rows.push_back(std::move(bad));
        }
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(10) << v;
    return ss.str();
}

nlohmann::json row_to_json(const DeviationResult& r) {
    nlohmann::json j;
    j["a_um"] = r.a_um;
    if (r.error) {
        j["error"] = *r.error;
        return j;
    }
    j["F_pfa_N"] = r.f_pfa * force_to_newton;
    j["F_N"] = r.f * force_to_newton;
    j["beta"] = r.beta;
    j["Fp_pfa_N_per_m"] = r.fp_pfa * gradient_to_newton_per_m;
    j["Fp_N_per_m"] = r.fp * gradient_to_newton_per_m;
    j["beta_tilde"] = r.beta_tilde;
    j["w"] = r.w;
    j["w_tilde"] = r.w_tilde;
    j["F_n0_N"] = r.f_n0 * force_to_newton;
    j["F_npos_N"] = r.f_npos * force_to_newton;
    j["beta_n0"] = r.beta_n0;
    j["beta_npos"] = r.beta_npos;
    j["beta_tilde_n0"] = r.beta_tilde_n0;
    j["beta_tilde_npos"] = r.beta_tilde_npos;
    j["F_over_ideal_pfa"] = r.f_over_ideal;
    j["Fp_over_ideal_pfa"] = r.fp_over_ideal;
    j["te_pc_substituted"] = r.te_pc_substituted;
    return j;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<DeviationResult>& rows) {
    os << "a_um,F_pfa_N,F_N,beta,Fp_pfa_N_per_m,Fp_N_per_m,beta_tilde,w,w_tilde,"
          "F_n0_N,F_npos_N,beta_n0,beta_npos,beta_tilde_n0,beta_tilde_npos,error\n";
    for (const auto& r : rows) {
        if (r.error) {
            std::string msg = *r.error;
            for (auto& c : msg)
                if (c == ',' || c == '\n') c = ';';
            os << fmt(r.a_um) << ",,,,,,,,,,,,,,," << msg << '\n';
            continue;
        }
        os << fmt(r.a_um) << ',' << fmt(r.f_pfa * force_to_newton) << ','
           << fmt(r.f * force_to_newton) << ',' << fmt(r.beta) << ','
           << fmt(r.fp_pfa * gradient_to_newton_per_m) << ','
           << fmt(r.fp * gradient_to_newton_per_m) << ',' << fmt(r.beta_tilde) << ','
           << fmt(r.w) << ',' << fmt(r.w_tilde) << ',' << fmt(r.f_n0 * force_to_newton) << ','
           << fmt(r.f_npos * force_to_newton) << ',' << fmt(r.beta_n0) << ','
           << fmt(r.beta_npos) << ',' << fmt(r.beta_tilde_n0) << ','
           << fmt(r.beta_tilde_npos) << ",\n";
    }
}

void write_json(std::ostream& os, const std::vector<DeviationResult>& rows) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) j.push_back(row_to_json(r));
    os << j.dump(2) << '\n';
}

namespace {

Prescription parse_prescription(const std::string& s) {
    if (s == "drude") return Prescription::drude;
    if (s == "plasma") return Prescription::plasma;
    if (s == "perfect_conductor" || s == "pc") return Prescription::perfect_conductor;
    throw std::invalid_argument("unknown prescription: " + s);
}

Boundary parse_boundary(const std::string& s) {
    if (s == "grounded") return Boundary::grounded;
    if (s == "isolated") return Boundary::isolated;
    throw std::invalid_argument("unknown boundary: " + s);
}

}  // namespace

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    in >> j;

    SweepConfig cfg;
    cfg.r1_um = j.at("R1_um").get<double>();
    cfg.r2_um = j.at("R2_um").get<double>();
    if (j.contains("gap_um")) {
        if (j["gap_um"].is_array())
            cfg.gaps_um = j["gap_um"].get<std::vector<double>>();
        else
            cfg.gaps_um = {j["gap_um"].get<double>()};
    } else if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        const double start = s.at("start_um").get<double>();
        const double stop = s.at("stop_um").get<double>();
        const int points = s.at("points").get<int>();
        const bool log = s.value("log", true);
        if (points < 1 || !(start > 0.0) || !(stop >= start))
            throw std::invalid_argument("config: invalid sweep block");
        for (int i = 0; i < points; ++i) {
            const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
            cfg.gaps_um.push_back(log ? start * std::pow(stop / start, t)
                                      : start + t * (stop - start));
        }
    } else {
        throw std::invalid_argument("config: need gap_um or sweep{}");
    }

    cfg.model.temperature_k = j.value("temperature_K", 300.0);
    cfg.model.prescription = parse_prescription(j.value("prescription", std::string("drude")));
    cfg.model.boundary = parse_boundary(j.value("boundary", std::string("isolated")));
    if (j.contains("omega_p_eV")) {
        if (j["omega_p_eV"].is_array()) {
            const auto v = j["omega_p_eV"].get<std::vector<double>>();
            if (v.size() != 2) throw std::invalid_argument("config: omega_p_eV wants 2 entries");
            cfg.model.omega_p1_ev = v[0];
            cfg.model.omega_p2_ev = v[1];
        } else {
            cfg.model.omega_p1_ev = cfg.model.omega_p2_ev = j["omega_p_eV"].get<double>();
        }
    }
    cfg.model.gamma_ev = j.value("gamma_eV", 0.035);

    if (j.contains("te_path")) {
        const std::string s = j["te_path"].get<std::string>();
        if (s == "auto")
            cfg.model.te_path = ModelSpec::TePath::automatic;
        else if (s == "exact")
            cfg.model.te_path = ModelSpec::TePath::exact_plasma;
        else if (s == "pc_substitute")
            cfg.model.te_path = ModelSpec::TePath::pc_substitute;
        else
            throw std::invalid_argument("config: unknown te_path: " + s);
    }

    if (j.contains("truncation")) {
        const auto& t = j["truncation"];
        if (t.contains("l_max")) cfg.options.classical.l_max = t["l_max"].get<int>();
        if (t.contains("m_max")) cfg.options.classical.m_max = t["m_max"].get<int>();
        if (t.contains("N1") || t.contains("N2") || t.contains("strip_width_factor")) {
            TruncationPlan plan = TruncationPlan::automatic(
                SphereGeometry(cfg.r1_um, cfg.r2_um, cfg.gaps_um.front()), false);
            if (t.contains("N1")) plan.n1 = t["N1"].get<int>();
            if (t.contains("N2")) plan.n2 = t["N2"].get<int>();
            if (t.contains("m_max")) plan.m_max = t["m_max"].get<int>();
            if (t.contains("strip_width_factor"))
                plan.strip_width_factor = t["strip_width_factor"].get<double>();
            cfg.options.plan = plan;
        }
    }
    if (j.contains("decimation")) {
        const auto& d = j["decimation"];
        if (!d.is_string()) {  // "auto" keeps the plan's defaults
            TruncationPlan plan = cfg.options.plan
                                      ? *cfg.options.plan
                                      : TruncationPlan::automatic(SphereGeometry(
                                            cfg.r1_um, cfg.r2_um, cfg.gaps_um.front()), false);
            plan.apply_blocks(d.at("p1").get<int>(), d.at("p2").get<int>());
            cfg.options.plan = plan;
        }
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        cfg.options.lifshitz.rel_tol = t.value("lifshitz_rel", 1e-8);
        cfg.options.classical.series_tol = t.value("series", 1e-14);
        cfg.options.classical.fd_step_rel = t.value("fd_step_rel", 1e-3);
        cfg.options.te_plasma.fd_step_rel = cfg.options.classical.fd_step_rel;
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        const std::string f = o.value("format", std::string("csv"));
        if (f == "csv")
            cfg.format = SweepConfig::Format::csv;
        else if (f == "json")
            cfg.format = SweepConfig::Format::json;
        else
            throw std::invalid_argument("config: unknown output format: " + f);
        cfg.output_path = o.value("path", std::string());
    }
    return cfg;
}

}  // namespace casimir
