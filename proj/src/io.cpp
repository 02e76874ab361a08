#include "pmheat/io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pmheat::io {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json potential_to_json(const PotentialSpec& spec) {
    json j;
    j["type"] = kind_name(spec.kind);
    switch (spec.kind) {
    case PotentialKind::hardy:
        j["lambda"] = spec.lambda;
        break;
    case PotentialKind::isotropic_multipolar: {
        json poles = json::array();
        for (const auto& p : spec.poles) {
            poles.push_back({{"center", p.center}, {"lambda", p.lambda}});
        }
        j["poles"] = std::move(poles);
        break;
    }
    case PotentialKind::dipole:
        j["d"] = spec.d;
        break;
    case PotentialKind::anisotropic_multipolar: {
        json poles = json::array();
        for (const auto& p : spec.dpoles) {
            poles.push_back({{"center", p.center}, {"d", p.d}});
        }
        j["dpoles"] = std::move(poles);
        break;
    }
    }
    return j;
}

PotentialSpec potential_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "hardy") {
        return PotentialSpec::make_hardy(j.at("lambda").get<double>());
    }
    if (type == "isotropic_multipolar") {
        std::vector<IsotropicPole> poles;
        for (const auto& p : j.at("poles")) {
            poles.push_back({p.at("center").get<std::vector<double>>(),
                             p.at("lambda").get<double>()});
        }
        return PotentialSpec::make_isotropic(std::move(poles));
    }
    if (type == "dipole") {
        return PotentialSpec::make_dipole(j.at("d").get<std::vector<double>>());
    }
    if (type == "anisotropic_multipolar") {
        std::vector<AnisotropicPole> poles;
        for (const auto& p : j.at("dpoles")) {
            poles.push_back({p.at("center").get<std::vector<double>>(),
                             p.at("d").get<std::vector<double>>()});
        }
        return PotentialSpec::make_anisotropic(std::move(poles));
    }
    throw std::invalid_argument("potential_from_json: unknown type '" + type + "'");
}

json threshold_to_json(const ThresholdReport& r) {
    json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["norm_bound"] = {{"value", r.norm_bound.value}, {"exact", r.norm_bound.exact}};
    j["constant"] = r.constant;
    j["tau"] = r.tau;
    j["bound_rhs"] = r.bound_rhs;
    j["passes"] = r.passes;
    j["margin"] = r.margin;
    j["k_opt"] = r.k_opt;
    j["tau_at_k_opt"] = r.tau_at_k_opt;
    j["param_value"] = r.param_value;
    j["param_threshold"] = r.param_threshold;
    return j;
}

json solve_report_to_json(const SolveReport& r) {
    json j;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["tau"] = r.tau;
    j["measured_rate"] = r.measured_rate;
    j["diffs"] = r.diffs;
    return j;
}

json dependence_to_json(const DependenceReport& r) {
    json j;
    j["measured"] = r.measured;
    j["bound"] = r.bound;
    j["within"] = r.within;
    j["data_gap"] = r.data_gap;
    j["potential_gap"] = r.potential_gap;
    return j;
}

json crosscheck_to_json(const CrosscheckReport& r) {
    json j;
    j["max_profile_gap"] = r.max_profile_gap;
    j["unmollified_gap"] = r.unmollified_gap;
    j["positivity_min_ratio"] = r.positivity_min_ratio;
    j["parity_mixing"] = r.parity_mixing;
    j["dipole_parity_growth"] = r.dipole_parity_growth;
    j["profile_ok"] = r.profile_ok;
    j["positivity_ok"] = r.positivity_ok;
    j["parity_ok"] = r.parity_ok;
    j["dipole_ok"] = r.dipole_ok;
    j["all_ok"] = r.all_ok;
    return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,rho,h\n";
    for (int m = 0; m < traj.times.count(); ++m) {
        const auto& field = traj.state(m);
        for (int j = 0; j < field.grid().count(); ++j) {
            os << format17(traj.times.node(m)) << ','
               << format17(field.grid().nodes()[static_cast<std::size_t>(j)]) << ','
               << format17(field.profile()[static_cast<std::size_t>(j)]) << '\n';
        }
    }
}

void write_series_csv(std::ostream& os, const AsymptoticSeries& series) {
    os << "t,norm\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        os << format17(series.times[i]) << ',' << format17(series.gap_norms[i]) << '\n';
    }
}

} // namespace pmheat::io
