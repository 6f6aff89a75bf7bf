#include "fdastap/scenario_io.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fdastap::io {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("config: field '" + path + "' " + what);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> known) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok) fail(path.empty() ? item.key() : path + "." + item.key(), "is not a recognized key");
    }
}

double get_num(const json& j, const std::string& path, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail(path + "." + key, "must be a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) fail(path + "." + key, "must be an integer");
    return j[key].get<int>();
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) fail(path + "." + key, "must be a string");
    return j[key].get<std::string>();
}

} // namespace

RunConfig default_config() {
    RunConfig rc;
    // reference target: 3 km, 45 deg azimuth and depression, 400 Hz Doppler
    rc.scenario.target.range_m = 3000.0;
    rc.scenario.target.azimuth_rad = geometry::deg2rad(45.0);
    rc.scenario.target.depression_rad = geometry::deg2rad(45.0);
    rc.scenario.target.velocity_mps = 50.0;
    rc.scenario.target.snr_db = 0.0;

    scene::ClutterRing ring;
    ring.range_m = 3006.0;
    ring.azimuth_start_rad = 0.0;
    ring.azimuth_stop_rad = geometry::deg2rad(180.0);
    ring.patches = 181;
    ring.depression_rad = geometry::deg2rad(45.0);
    ring.cnr_db = 20.0;
    rc.scenario.clutter_rings = {ring};

    scene::Jammer jam;
    jam.azimuth_rad = geometry::deg2rad(120.0);
    jam.depression_rad = geometry::deg2rad(45.0);
    jam.jnr_db = 20.0;
    rc.scenario.jammers = {jam};
    return rc;
}

namespace {

void parse_system(const json& j, SystemConfig& s) {
    check_keys(j, "system",
               {"n_tx", "n_rx", "d_tx_m", "d_rx_m", "carrier_hz", "freq_offset_hz", "prf_hz",
                "pulses", "pulse_duration_s", "bandwidth_hz", "sample_rate_hz", "wavelength_m",
                "platform_mps"});
    s.n_tx = get_int(j, "system", "n_tx", s.n_tx);
    s.n_rx = get_int(j, "system", "n_rx", s.n_rx);
    s.d_tx_m = get_num(j, "system", "d_tx_m", s.d_tx_m);
    s.d_rx_m = get_num(j, "system", "d_rx_m", s.d_rx_m);
    s.carrier_hz = get_num(j, "system", "carrier_hz", s.carrier_hz);
    s.freq_offset_hz = get_num(j, "system", "freq_offset_hz", s.freq_offset_hz);
    s.prf_hz = get_num(j, "system", "prf_hz", s.prf_hz);
    s.pulses = get_int(j, "system", "pulses", s.pulses);
    s.pulse_duration_s = get_num(j, "system", "pulse_duration_s", s.pulse_duration_s);
    s.bandwidth_hz = get_num(j, "system", "bandwidth_hz", s.bandwidth_hz);
    const bool had_rate = j.contains("sample_rate_hz");
    s.sample_rate_hz = get_num(j, "system", "sample_rate_hz", s.sample_rate_hz);
    if (!had_rate && j.contains("bandwidth_hz")) s.sample_rate_hz = 2.0 * s.bandwidth_hz;
    s.wavelength_m = get_num(j, "system", "wavelength_m", s.wavelength_m);
    s.platform_mps = get_num(j, "system", "platform_mps", s.platform_mps);
}

void parse_target(const json& j, scene::TargetDesc& t, const SystemConfig& s) {
    check_keys(j, "scene.target",
               {"range_m", "azimuth_deg", "depression_deg", "velocity_mps", "doppler_hz", "snr_db"});
    t.range_m = get_num(j, "scene.target", "range_m", t.range_m);
    t.azimuth_rad = geometry::deg2rad(
        get_num(j, "scene.target", "azimuth_deg", geometry::rad2deg(t.azimuth_rad)));
    t.depression_rad = geometry::deg2rad(
        get_num(j, "scene.target", "depression_deg", geometry::rad2deg(t.depression_rad)));
    if (j.contains("velocity_mps") && j.contains("doppler_hz"))
        fail("scene.target.doppler_hz", "conflicts with velocity_mps; give one of the two");
    if (j.contains("doppler_hz")) {
        const double fd = get_num(j, "scene.target", "doppler_hz", 0.0);
        t.velocity_mps = fd * s.wavelength_m / 2.0;
    } else {
        t.velocity_mps = get_num(j, "scene.target", "velocity_mps", t.velocity_mps);
    }
    t.snr_db = get_num(j, "scene.target", "snr_db", t.snr_db);
}

void parse_scene(const json& j, scene::Scene& sc, const SystemConfig& s) {
    check_keys(j, "scene", {"target", "clutter_rings", "jammers"});
    if (j.contains("target")) {
        if (!j["target"].is_object()) fail("scene.target", "must be an object");
        parse_target(j["target"], sc.target, s);
    }
    if (j.contains("clutter_rings")) {
        if (!j["clutter_rings"].is_array()) fail("scene.clutter_rings", "must be an array");
        sc.clutter_rings.clear();
        int idx = 0;
        for (const auto& rj : j["clutter_rings"]) {
            const std::string path = "scene.clutter_rings[" + std::to_string(idx++) + "]";
            if (!rj.is_object()) fail(path, "must be an object");
            check_keys(rj, path,
                       {"range_m", "azimuth_start_deg", "azimuth_stop_deg", "patches",
                        "depression_deg", "cnr_db"});
            scene::ClutterRing r;
            r.range_m = get_num(rj, path, "range_m", r.range_m);
            r.azimuth_start_rad =
                geometry::deg2rad(get_num(rj, path, "azimuth_start_deg", 0.0));
            r.azimuth_stop_rad =
                geometry::deg2rad(get_num(rj, path, "azimuth_stop_deg", 180.0));
            r.patches = get_int(rj, path, "patches", r.patches);
            r.depression_rad = geometry::deg2rad(get_num(rj, path, "depression_deg", 45.0));
            r.cnr_db = get_num(rj, path, "cnr_db", r.cnr_db);
            sc.clutter_rings.push_back(r);
        }
    }
    if (j.contains("jammers")) {
        if (!j["jammers"].is_array()) fail("scene.jammers", "must be an array");
        sc.jammers.clear();
        int idx = 0;
        for (const auto& jj : j["jammers"]) {
            const std::string path = "scene.jammers[" + std::to_string(idx++) + "]";
            if (!jj.is_object()) fail(path, "must be an object");
            check_keys(jj, path, {"azimuth_deg", "depression_deg", "jnr_db"});
            scene::Jammer jam;
            jam.azimuth_rad = geometry::deg2rad(get_num(jj, path, "azimuth_deg", 120.0));
            jam.depression_rad = geometry::deg2rad(get_num(jj, path, "depression_deg", 45.0));
            jam.jnr_db = get_num(jj, path, "jnr_db", jam.jnr_db);
            sc.jammers.push_back(jam);
        }
    }
}

void parse_grid(const json& j, stap::GridSpec& g) {
    check_keys(j, "grid",
               {"azimuth_start_deg", "azimuth_stop_deg", "azimuth_step_deg", "doppler_start_hz",
                "doppler_stop_hz", "doppler_step_hz"});
    g.azimuth_start_deg = get_num(j, "grid", "azimuth_start_deg", g.azimuth_start_deg);
    g.azimuth_stop_deg = get_num(j, "grid", "azimuth_stop_deg", g.azimuth_stop_deg);
    g.azimuth_step_deg = get_num(j, "grid", "azimuth_step_deg", g.azimuth_step_deg);
    g.doppler_start_hz = get_num(j, "grid", "doppler_start_hz", g.doppler_start_hz);
    g.doppler_stop_hz = get_num(j, "grid", "doppler_stop_hz", g.doppler_stop_hz);
    g.doppler_step_hz = get_num(j, "grid", "doppler_step_hz", g.doppler_step_hz);
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    RunConfig rc = default_config();
    std::string trimmed;
    for (char c : json_text)
        if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
    if (trimmed.empty()) return rc;

    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("config: top level must be a JSON object");
    check_keys(j, "",
               {"system", "scene", "grid", "mode", "cnr_mode", "loss_ref", "loading", "seed",
                "out_dir", "max_snapshot_dim", "target_extent_m"});

    if (j.contains("system")) {
        if (!j["system"].is_object()) fail("system", "must be an object");
        parse_system(j["system"], rc.system);
    }
    if (j.contains("scene")) {
        if (!j["scene"].is_object()) fail("scene", "must be an object");
        parse_scene(j["scene"], rc.scenario, rc.system);
    }
    if (j.contains("grid")) {
        if (!j["grid"].is_object()) fail("grid", "must be an object");
        parse_grid(j["grid"], rc.grid);
    }
    const std::string mode = get_str(j, "", "mode", "fda");
    if (mode == "fda") rc.mode = model::Mode::fda;
    else if (mode == "mimo") rc.mode = model::Mode::mimo;
    else if (mode == "pa") rc.mode = model::Mode::pa;
    else fail("mode", "must be one of fda, mimo, pa");

    const std::string cnr = get_str(j, "", "cnr_mode", "per-patch");
    if (cnr == "per-patch") rc.cnr_mode = scene::CnrMode::per_patch;
    else if (cnr == "total") rc.cnr_mode = scene::CnrMode::total;
    else fail("cnr_mode", "must be per-patch or total");

    const std::string ref = get_str(j, "", "loss_ref", "eq64");
    if (ref == "eq64") rc.loss_ref = stap::LossRef::eq64;
    else if (ref == "matched") rc.loss_ref = stap::LossRef::matched;
    else fail("loss_ref", "must be eq64 or matched");

    rc.loading = get_num(j, "", "loading", rc.loading);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            fail("seed", "must be an integer");
        rc.seed = j["seed"].get<std::uint64_t>();
    }
    rc.out_dir = get_str(j, "", "out_dir", rc.out_dir);
    rc.max_snapshot_dim =
        static_cast<std::size_t>(get_int(j, "", "max_snapshot_dim",
                                         static_cast<int>(rc.max_snapshot_dim)));
    rc.target_extent_m = get_num(j, "", "target_extent_m", rc.target_extent_m);
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string save_config(const RunConfig& rc) {
    json j;
    j["system"] = {{"n_tx", rc.system.n_tx},
                   {"n_rx", rc.system.n_rx},
                   {"d_tx_m", rc.system.d_tx_m},
                   {"d_rx_m", rc.system.d_rx_m},
                   {"carrier_hz", rc.system.carrier_hz},
                   {"freq_offset_hz", rc.system.freq_offset_hz},
                   {"prf_hz", rc.system.prf_hz},
                   {"pulses", rc.system.pulses},
                   {"pulse_duration_s", rc.system.pulse_duration_s},
                   {"bandwidth_hz", rc.system.bandwidth_hz},
                   {"sample_rate_hz", rc.system.sample_rate_hz},
                   {"wavelength_m", rc.system.wavelength_m},
                   {"platform_mps", rc.system.platform_mps}};
    json target = {{"range_m", rc.scenario.target.range_m},
                   {"azimuth_deg", geometry::rad2deg(rc.scenario.target.azimuth_rad)},
                   {"depression_deg", geometry::rad2deg(rc.scenario.target.depression_rad)},
                   {"velocity_mps", rc.scenario.target.velocity_mps},
                   {"snr_db", rc.scenario.target.snr_db}};
    json rings = json::array();
    for (const auto& r : rc.scenario.clutter_rings)
        rings.push_back({{"range_m", r.range_m},
                         {"azimuth_start_deg", geometry::rad2deg(r.azimuth_start_rad)},
                         {"azimuth_stop_deg", geometry::rad2deg(r.azimuth_stop_rad)},
                         {"patches", r.patches},
                         {"depression_deg", geometry::rad2deg(r.depression_rad)},
                         {"cnr_db", r.cnr_db}});
    json jams = json::array();
    for (const auto& jm : rc.scenario.jammers)
        jams.push_back({{"azimuth_deg", geometry::rad2deg(jm.azimuth_rad)},
                        {"depression_deg", geometry::rad2deg(jm.depression_rad)},
                        {"jnr_db", jm.jnr_db}});
    j["scene"] = {{"target", target}, {"clutter_rings", rings}, {"jammers", jams}};
    j["grid"] = {{"azimuth_start_deg", rc.grid.azimuth_start_deg},
                 {"azimuth_stop_deg", rc.grid.azimuth_stop_deg},
                 {"azimuth_step_deg", rc.grid.azimuth_step_deg},
                 {"doppler_start_hz", rc.grid.doppler_start_hz},
                 {"doppler_stop_hz", rc.grid.doppler_stop_hz},
                 {"doppler_step_hz", rc.grid.doppler_step_hz}};
    j["mode"] = stap::mode_name(rc.mode);
    j["cnr_mode"] = rc.cnr_mode == scene::CnrMode::per_patch ? "per-patch" : "total";
    j["loss_ref"] = rc.loss_ref == stap::LossRef::eq64 ? "eq64" : "matched";
    j["loading"] = rc.loading;
    j["seed"] = rc.seed;
    j["out_dir"] = rc.out_dir;
    j["max_snapshot_dim"] = static_cast<int>(rc.max_snapshot_dim);
    j["target_extent_m"] = rc.target_extent_m;
    return j.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& rc) {
    const std::string s = save_config(rc);
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> validate_config(const RunConfig& rc) {
    rc.system.validate();
    rc.grid.validate();
    if (rc.system.snapshot_dim() > rc.max_snapshot_dim)
        throw std::runtime_error("config: snapshot dimension " +
                                 std::to_string(rc.system.snapshot_dim()) +
                                 " exceeds max_snapshot_dim " + std::to_string(rc.max_snapshot_dim));
    if (rc.loading < 0.0) throw std::runtime_error("config: loading must be nonnegative");
    for (const auto& ring : rc.scenario.clutter_rings) {
        if (ring.patches < 1) throw std::runtime_error("config: clutter ring needs patches >= 1");
        if (ring.azimuth_start_rad < 0.0 || ring.azimuth_stop_rad > kPi ||
            ring.azimuth_stop_rad < ring.azimuth_start_rad)
            throw std::runtime_error("config: clutter azimuth span must lie inside [0, 180] deg");
    }

    std::vector<std::string> warnings;
    const auto code = phasecode::design_phase_codes(rc.system);
    const double f_td =
        std::abs(scene::target_doppler(rc.scenario.target, rc.system));
    const auto rep = phasecode::validate_phase_codes(code, f_td, rc.system);
    if (!rep.precondition_ok || !rep.feasible) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "phase code %s at |f_td| = %.3f Hz: min gap %.3f Hz, required %.3f Hz",
                      rep.precondition_ok ? "infeasible" : "outside its design envelope", f_td,
                      rep.min_gap_hz, rep.required_gap_hz - rep.tolerance_hz);
        warnings.push_back(buf);
    }
    if (rc.system.n_tx >= 2) {
        const auto dec = geometry::check_decorrelation(rc.system.freq_offset_hz, rc.system.n_tx,
                                                       rc.target_extent_m);
        if (!dec.pass) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "frequency offset %.0f Hz exceeds the decorrelation bound %.0f Hz",
                          rc.system.freq_offset_hz, dec.bound_hz);
            warnings.push_back(buf);
        }
    }
    return warnings;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_pattern_csv(const std::string& path, const stap::PatternGrid& grid) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "azimuth_deg,doppler_hz,value_db\n";
    for (std::size_t i = 0; i < grid.azimuth_deg.size(); ++i)
        for (std::size_t j = 0; j < grid.doppler_hz.size(); ++j)
            out << format_double(grid.azimuth_deg[i]) << ',' << format_double(grid.doppler_hz[j])
                << ',' << format_double(grid.at(i, j)) << '\n';
}

void write_cut_csv(const std::string& path, const stap::PatternCut& cut) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << (cut.axis == stap::CutAxis::azimuth ? "azimuth_deg" : "doppler_hz") << ",value_db\n";
    for (std::size_t i = 0; i < cut.axis_values.size(); ++i)
        out << format_double(cut.axis_values[i]) << ',' << format_double(cut.value_db[i]) << '\n';
}

void write_loss_csv(const std::string& path, const std::vector<double>& doppler_hz,
                    const std::vector<double>& loss_db) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "doppler_hz,loss_db\n";
    for (std::size_t i = 0; i < doppler_hz.size(); ++i)
        out << format_double(doppler_hz[i]) << ',' << format_double(loss_db[i]) << '\n';
}

void write_phase_code_csv(const std::string& path, const phasecode::PhaseCode& code,
                          const std::vector<double>& centers_hz) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "element,phi_hz,center_hz\n";
    for (int m = 0; m < code.size(); ++m)
        out << (m + 1) << ',' << format_double(code.phi_hz[m]) << ','
            << format_double(centers_hz[m]) << '\n';
}

void write_manifest(const std::string& path, const std::string& command, const RunConfig& rc,
                    double wall_time_s, const std::vector<std::string>& outputs) {
    json j;
    j["command"] = command;
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(rc)));
    j["config_hash"] = hash;
    j["version"] = "0.1.0";
    j["seed"] = rc.seed;
    j["wall_time_s"] = wall_time_s;
    j["outputs"] = outputs;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

} // namespace fdastap::io
