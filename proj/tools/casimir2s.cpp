// casimir2s: Casimir force and force gradient between two conducting spheres
// at finite temperature, beyond the proximity force approximation.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "casimir/assembly.hpp"
#include "casimir/constants.hpp"
#include "casimir/de_positive.hpp"

namespace {

using namespace casimir;

struct ModelFlags {
    std::string prescription = "drude";
    std::string boundary = "isolated";
    double temperature = 300.0;
    double omega_p = 9.0;
    double gamma = 0.035;

    void attach(CLI::App* cmd) {
        cmd->add_option("--prescription", prescription,
                        "conductor model: drude | plasma | pc")
            ->check(CLI::IsMember({"drude", "plasma", "pc", "perfect_conductor"}));
        cmd->add_option("--boundary", boundary, "grounded | isolated")
            ->check(CLI::IsMember({"grounded", "isolated"}));
        cmd->add_option("--temperature", temperature, "temperature in K");
        cmd->add_option("--omega-p", omega_p, "plasma frequency in eV");
        cmd->add_option("--gamma", gamma, "Drude relaxation in eV");
    }

    ModelSpec spec() const {
        ModelSpec m;
        if (prescription == "drude") m.prescription = Prescription::drude;
        else if (prescription == "plasma") m.prescription = Prescription::plasma;
        else m.prescription = Prescription::perfect_conductor;
        m.boundary = boundary == "grounded" ? Boundary::grounded : Boundary::isolated;
        m.temperature_k = temperature;
        m.omega_p1_ev = m.omega_p2_ev = omega_p;
        m.gamma_ev = gamma;
        return m;
    }
};

int run_pp(const ModelFlags& mf, double gap, const std::string& part, const std::string& pol) {
    const ModelSpec spec = mf.spec();
    spec.validate();
    const LifshitzPlanar pp(spec.permittivity(1), spec.permittivity(2), spec.temperature_k);
    ModeFilter f;
    if (part == "zero") f.part = MatsubaraPart::zero_only;
    else if (part == "positive") f.part = MatsubaraPart::positive_only;
    if (pol == "te") f.pol = PolarizationFilter::te_only;
    else if (pol == "tm") f.pol = PolarizationFilter::tm_only;

    const auto fe = pp.free_energy(gap, f);
    const auto pr = pp.pressure(gap, f);
    nlohmann::json j;
    j["a_um"] = gap;
    j["free_energy_eV_per_um2"] = fe.value;
    j["free_energy_J_per_m2"] = fe.value * ev_in_joule * 1e12;
    j["free_energy_error"] = fe.error;
    j["pressure_eV_per_um3"] = pr.value;
    j["pressure_Pa"] = pr.value * ev_in_joule * 1e18;
    j["pressure_error"] = pr.error;
    if (f.part != MatsubaraPart::zero_only && f.pol == PolarizationFilter::both) {
        const auto g = pp.gee(gap);
        j["gee_eV_per_um"] = g.value;
        j["gee_error"] = g.error;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_classical(const ModelFlags& mf, double r1, double r2, double gap, int l_max, int m_max) {
    const ModelSpec spec = mf.spec();
    spec.validate();
    const SphereGeometry geom(r1, r2, gap);
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(geom);
    ClassicalOptions copt;
    if (l_max > 0) copt.l_max = l_max;
    if (m_max >= 0) copt.m_max = m_max;

    ClassicalResult res;
    nlohmann::json parts;
    switch (spec.prescription) {
        case Prescription::drude:
            res = spec.boundary == Boundary::grounded
                      ? dirichlet_classical(bg, spec.temperature_k, copt)
                      : drude_isolated_classical(bg, spec.temperature_k, copt);
            break;
        case Prescription::perfect_conductor: {
            const PcClassicalResult pc = pc_classical(bg, spec.temperature_k, spec.boundary, copt);
            res = pc.total;
            parts["tm_force_N"] = pc.tm.force * force_to_newton;
            parts["te_force_N"] = pc.te.force * force_to_newton;
            break;
        }
        case Prescription::plasma: {
            const TruncationPlan plan = TruncationPlan::automatic(geom);
            const PlasmaClassicalResult pl =
                plasma_classical_total(geom, spec.temperature_k, spec.omega_p1_ev,
                                       spec.omega_p2_ev, spec.boundary, plan);
            res = pl.total;
            parts["tm_force_N"] = pl.tm.force * force_to_newton;
            parts["te_force_N"] = pl.te.force * force_to_newton;
            parts["decimation_p1"] = pl.p1_used;
            parts["decimation_p2"] = pl.p2_used;
            break;
        }
    }
    nlohmann::json j;
    j["a_um"] = gap;
    j["energy_eV"] = res.energy;
    j["force_N"] = res.force * force_to_newton;
    j["force_gradient_N_per_m"] = res.force_gradient * gradient_to_newton_per_m;
    j["l_max_used"] = res.l_max_used;
    j["m_max_used"] = res.m_max_used;
    j["converged"] = res.converged;
    if (!parts.empty()) j["parts"] = parts;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_deviation(const ModelFlags& mf, double r1, double r2, double gap) {
    SweepConfig cfg;
    cfg.r1_um = r1;
    cfg.r2_um = r2;
    cfg.gaps_um = {gap};
    cfg.model = mf.spec();
    const auto rows = sweep(cfg);
    write_json(std::cout, rows);
    return rows.front().error ? 1 : 0;
}

int run_sweep(const std::string& config_path, const ModelFlags& mf, const CLI::App* cmd,
              std::string output_override) {
    SweepConfig cfg = load_sweep_config(config_path);
    // command-line flags override config keys when explicitly given
    if (cmd->count("--prescription") || cmd->count("--boundary") ||
        cmd->count("--temperature") || cmd->count("--omega-p") || cmd->count("--gamma")) {
        ModelSpec flags = mf.spec();
        if (cmd->count("--prescription")) cfg.model.prescription = flags.prescription;
        if (cmd->count("--boundary")) cfg.model.boundary = flags.boundary;
        if (cmd->count("--temperature")) cfg.model.temperature_k = flags.temperature_k;
        if (cmd->count("--omega-p")) {
            cfg.model.omega_p1_ev = flags.omega_p1_ev;
            cfg.model.omega_p2_ev = flags.omega_p2_ev;
        }
        if (cmd->count("--gamma")) cfg.model.gamma_ev = flags.gamma_ev;
    }
    if (!output_override.empty()) cfg.output_path = output_override;

    const auto rows = sweep(cfg);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!cfg.output_path.empty()) {
        file.open(cfg.output_path);
        if (!file) {
            std::cerr << "cannot open output: " << cfg.output_path << '\n';
            return 2;
        }
        os = &file;
    }
    if (cfg.format == SweepConfig::Format::csv)
        write_csv(*os, rows);
    else
        write_json(*os, rows);

    int errors = 0;
    for (const auto& r : rows)
        if (r.error) {
            ++errors;
            std::cerr << "a = " << r.a_um << " um failed: " << *r.error << '\n';
        }
    return errors == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir force between two spheres beyond the proximity force approximation"};
    app.require_subcommand(1);

    ModelFlags mf_pp, mf_cl, mf_dev, mf_sw;
    double gap = 0.5, r1 = 10.0, r2 = 10.0;
    std::string part = "all", pol = "both", config_path, output_path;
    int l_max = 0, m_max = -1;

    CLI::App* pp = app.add_subcommand("pp", "plane-parallel Lifshitz quantities");
    pp->add_option("--gap", gap, "separation in um")->required();
    mf_pp.attach(pp);
    pp->add_option("--part", part, "matsubara part: all | zero | positive")
        ->check(CLI::IsMember({"all", "zero", "positive"}));
    pp->add_option("--pol", pol, "polarization: both | te | tm")
        ->check(CLI::IsMember({"both", "te", "tm"}));

    CLI::App* cl = app.add_subcommand("classical", "zero-frequency sphere-sphere term");
    cl->add_option("--r1", r1, "radius of sphere 1 in um")->required();
    cl->add_option("--r2", r2, "radius of sphere 2 in um")->required();
    cl->add_option("--gap", gap, "separation in um")->required();
    cl->add_option("--l-max", l_max, "multipole truncation override");
    cl->add_option("--m-max", m_max, "azimuthal truncation override");
    mf_cl.attach(cl);

    CLI::App* dev = app.add_subcommand("deviation", "beyond-PFA deviation at one separation");
    dev->add_option("--r1", r1, "radius of sphere 1 in um")->required();
    dev->add_option("--r2", r2, "radius of sphere 2 in um")->required();
    dev->add_option("--gap", gap, "separation in um")->required();
    mf_dev.attach(dev);

    CLI::App* sw = app.add_subcommand("sweep", "config-driven separation sweep");
    sw->add_option("--config", config_path, "JSON configuration file")->required();
    sw->add_option("--output", output_path, "override the configured output path");
    mf_sw.attach(sw);

    CLI::App* tb = app.add_subcommand("tables", "dump the embedded DE coefficient tables");
    std::string tables_out;
    tb->add_option("--output", tables_out, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pp->parsed()) return run_pp(mf_pp, gap, part, pol);
        if (cl->parsed()) return run_classical(mf_cl, r1, r2, gap, l_max, m_max);
        if (dev->parsed()) return run_deviation(mf_dev, r1, r2, gap);
        if (sw->parsed()) return run_sweep(config_path, mf_sw, sw, output_path);
        if (tb->parsed()) {
            if (tables_out.empty()) {
                casimir::write_de_tables_csv(std::cout);
            } else {
                std::ofstream out(tables_out);
                if (!out) {
                    std::cerr << "cannot open output: " << tables_out << '\n';
                    return 2;
                }
                casimir::write_de_tables_csv(out);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
