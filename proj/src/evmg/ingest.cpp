// SPDX-License-Identifier: Apache-2.0

#include "evmg/ingest.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "evmg/csv.hpp"
#include "evmg/errors.hpp"

namespace evmg {

using json = nlohmann::json;

std::string_view to_string(ProfileKind kind) {
    return kind == ProfileKind::BaseLoad ? "base_load" : "pv_production";
}

void validate(const Profile& profile, const TimeGrid& grid) {
    if (profile.values.size() != static_cast<std::size_t>(grid.slots_per_day))
        throw InvalidInput(std::string(to_string(profile.kind)) + " profile has " +
                           std::to_string(profile.values.size()) + " slots, expected " +
                           std::to_string(grid.slots_per_day));
    for (std::size_t t = 0; t < profile.values.size(); ++t) {
        if (!std::isfinite(profile.values[t]) || profile.values[t] < 0.0)
            throw InvalidInput(std::string(to_string(profile.kind)) + " value at slot " +
                               std::to_string(t) + " must be finite and >= 0");
    }
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::vector<double> parse_slot_series(std::istream& in, const TimeGrid& grid,
                                      std::string_view source) {
    const csv::Table table = csv::read(in, source);
    const std::string src(source);
    if (table.header.size() != 2)
        throw ParseError(src + ": header must have two columns (slot,<value>)", 1);
    std::vector<double> values;
    values.reserve(grid.slots_per_day);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string at = src + ":" + std::to_string(row.line) + ": row " + std::to_string(r);
        if (row.fields.size() != 2) throw ParseError(at + ": expected 2 fields", row.line);
        const int slot = csv::to_int(row.fields[0], row.line, source);
        if (slot != static_cast<int>(r))
            throw ParseError(at + ": expected slot " + std::to_string(r) + ", found " +
                                 std::to_string(slot) + " (missing, duplicate or out of order)",
                             row.line);
        const double v = csv::to_double(row.fields[1], row.line, source);
        if (v < 0.0)
            throw ParseError(at + ": negative value " + row.fields[1], row.line);
        values.push_back(v);
    }
    if (values.size() != static_cast<std::size_t>(grid.slots_per_day))
        throw ParseError(src + ": expected " + std::to_string(grid.slots_per_day) +
                         " rows, found " + std::to_string(values.size()));
    return values;
}

std::vector<double> load_slot_series(const std::filesystem::path& path, const TimeGrid& grid) {
    auto in = open_input(path);
    return parse_slot_series(in, grid, path.string());
}

Profile parse_profile(std::istream& in, ProfileKind kind, const TimeGrid& grid,
                      std::string_view source) {
    return Profile{kind, parse_slot_series(in, grid, source)};
}

Profile load_profile(const std::filesystem::path& path, ProfileKind kind, const TimeGrid& grid) {
    auto in = open_input(path);
    return parse_profile(in, kind, grid, path.string());
}

void write_profile(std::ostream& out, const Profile& profile) {
    out << "slot,kw\n";
    for (std::size_t t = 0; t < profile.values.size(); ++t)
        out << t << ',' << format_exact(profile.values[t]) << '\n';
}

void write_profile(const std::filesystem::path& path, const Profile& profile) {
    auto out = open_output(path);
    write_profile(out, profile);
}

Profile synth_profile(ProfileKind kind, const std::vector<Segment>& segments,
                      const TimeGrid& grid) {
    for (const auto& s : segments) {
        if (!std::isfinite(s.value) || s.value < 0.0)
            throw DefinitionError("segment " + s.from.str() + "-" + s.to.str() +
                                  " has a negative or non-finite value");
    }
    Profile p{kind, rasterize(segments, grid)};
    validate(p, grid);
    return p;
}

Profile irradiance_to_power(std::span<const double> irradiance_w_m2, double panel_area_m2,
                            double efficiency) {
    if (!(panel_area_m2 > 0.0)) throw InvalidInput("panel area must be > 0");
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        throw InvalidInput("panel efficiency must be in (0, 1]");
    Profile p{ProfileKind::PvProduction, {}};
    p.values.reserve(irradiance_w_m2.size());
    for (std::size_t t = 0; t < irradiance_w_m2.size(); ++t) {
        const double g = irradiance_w_m2[t];
        if (!std::isfinite(g) || g < 0.0)
            throw InvalidInput("negative irradiance at slot " + std::to_string(t));
        p.values.push_back(g * panel_area_m2 * efficiency / 1000.0);
    }
    return p;
}

std::vector<EvSpec> parse_fleet(std::istream& in, std::string_view source,
                                double charge_efficiency, double discharge_efficiency) {
    const csv::Table table = csv::read(in, source);
    const std::string src(source);
    std::string header;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        header += (i ? "," : "") + table.header[i];
    if (header != kFleetCsvHeader)
        throw ParseError(src + ": header must be '" + std::string(kFleetCsvHeader) + "'", 1);

    std::vector<EvSpec> fleet;
    std::set<std::string> ids;
    for (const auto& row : table.rows) {
        if (row.fields.size() != 9)
            throw ParseError(src + ":" + std::to_string(row.line) + ": expected 9 fields",
                             row.line);
        const auto& f = row.fields;
        EvSpec ev;
        ev.id = f[0];
        if (ev.id.empty() || !ids.insert(ev.id).second)
            throw ParseError(src + ":" + std::to_string(row.line) + ": empty or duplicate id",
                             row.line);
        ev.capacity_kwh = csv::to_double(f[1], row.line, source);
        try {
            ev.mode = parse_charge_mode(f[2]);
        } catch (const InvalidInput& e) {
            throw ParseError(src + ":" + std::to_string(row.line) + ": " + e.what(), row.line);
        }
        ev.arrival_slot = csv::to_int(f[3], row.line, source);
        ev.departure_slot = csv::to_int(f[4], row.line, source);
        ev.initial_soc = csv::to_double(f[5], row.line, source);
        ev.target_soc = csv::to_double(f[6], row.line, source);
        ev.soc_min = csv::to_double(f[7], row.line, source);
        ev.soc_max = csv::to_double(f[8], row.line, source);
        ev.charge_efficiency = charge_efficiency;
        ev.discharge_efficiency = discharge_efficiency;
        fleet.push_back(std::move(ev));
    }
    return fleet;
}

std::vector<EvSpec> load_fleet(const std::filesystem::path& path, double charge_efficiency,
                               double discharge_efficiency) {
    auto in = open_input(path);
    return parse_fleet(in, path.string(), charge_efficiency, discharge_efficiency);
}

void write_fleet(std::ostream& out, std::span<const EvSpec> fleet) {
    out << kFleetCsvHeader << '\n';
    for (const auto& ev : fleet) {
        out << ev.id << ',' << format_exact(ev.capacity_kwh) << ',' << to_string(ev.mode) << ','
            << ev.arrival_slot << ',' << ev.departure_slot << ',' << format_exact(ev.initial_soc)
            << ',' << format_exact(ev.target_soc) << ',' << format_exact(ev.soc_min) << ','
            << format_exact(ev.soc_max) << '\n';
    }
}

void write_fleet(const std::filesystem::path& path, std::span<const EvSpec> fleet) {
    auto out = open_output(path);
    write_fleet(out, fleet);
}

// ---------------------------------------------------------------------------
// Scenario documents

namespace {

using Problems = std::vector<std::string>;

/// Parses JSON, recording duplicate object keys as problems instead of
/// silently keeping the last value.
json parse_strict(std::string_view text, Problems& problems) {
    struct Frame {
        bool object;
        std::set<std::string> seen;
        std::string key;
    };
    std::vector<Frame> stack;
    auto path = [&] {
        std::string p;
        for (const auto& f : stack) {
            if (f.object && !f.key.empty()) p += (p.empty() ? "" : ".") + f.key;
        }
        return p;
    };
    json::parser_callback_t cb = [&](int, json::parse_event_t ev, json& parsed) {
        switch (ev) {
        case json::parse_event_t::object_start: stack.push_back({true, {}, {}}); break;
        case json::parse_event_t::array_start: stack.push_back({false, {}, {}}); break;
        case json::parse_event_t::object_end:
        case json::parse_event_t::array_end:
            if (!stack.empty()) stack.pop_back();
            break;
        case json::parse_event_t::key: {
            auto& top = stack.back();
            top.key = parsed.get<std::string>();
            if (!top.seen.insert(top.key).second) {
                std::string msg = path() + ": key given more than once";
                if (top.key == "flag_power") msg += " ('auto' and a number are mutually exclusive)";
                problems.push_back(msg);
            }
            break;
        }
        default: break;
        }
        return true;
    };
    try {
        return json::parse(text.begin(), text.end(), cb);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("malformed JSON: ") + e.what());
    }
}

/// Typed, strict view of one JSON object. Every key read is remembered so
/// `finish` can report the rest as unknown.
class Section {
public:
    Section(const json* node, std::string path, Problems& problems)
        : node_(node), path_(std::move(path)), problems_(problems) {
        if (node_ && !node_->is_object()) {
            problem("", "must be an object");
            node_ = nullptr;
        }
    }

    bool valid() const { return node_ != nullptr; }
    bool has(const std::string& key) const { return node_ && node_->contains(key); }

    const json* get(const std::string& key) {
        known_.insert(key);
        if (!node_) return nullptr;
        auto it = node_->find(key);
        return it == node_->end() ? nullptr : &*it;
    }

    const json* require(const std::string& key) {
        const json* v = get(key);
        if (!v && node_) problem(key, "missing required key");
        return v;
    }

    double number(const std::string& key, double fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_number()) {
            problem(key, "must be a number");
            return fallback;
        }
        return v->get<double>();
    }

    int integer(const std::string& key, int fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_number_integer()) {
            problem(key, "must be an integer");
            return fallback;
        }
        return v->get<int>();
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_boolean()) {
            problem(key, "must be true or false");
            return fallback;
        }
        return v->get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_string()) {
            problem(key, "must be a string");
            return fallback;
        }
        return v->get<std::string>();
    }

    void finish() {
        if (!node_) return;
        for (auto it = node_->begin(); it != node_->end(); ++it)
            if (!known_.count(it.key())) problem(it.key(), "unknown key");
    }

    std::string child(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    void problem(const std::string& key, const std::string& msg) {
        const std::string where = key.empty() ? path_ : child(key);
        problems_.push_back((where.empty() ? std::string("scenario") : where) + ": " + msg);
    }

    /// Runs `fn`, turning library errors into problems against `key`.
    template <class Fn> void guard(const std::string& key, Fn&& fn) {
        try {
            fn();
        } catch (const ScenarioError& e) {
            for (const auto& p : e.problems()) problem(key, p);
        } catch (const Error& e) {
            problem(key, e.what());
        }
    }

private:
    const json* node_;
    std::string path_;
    Problems& problems_;
    std::set<std::string> known_;
};

ClockTime clock_of(const json& v) {
    if (!v.is_string()) throw InvalidInput("clock times must be \"HH:MM\" strings");
    return ClockTime::parse(v.get<std::string>());
}

std::vector<Segment> parse_segments(const json& list, const std::string& value_key) {
    if (!list.is_array() || list.empty())
        throw InvalidInput("segments must be a non-empty array");
    std::vector<Segment> out;
    for (const auto& item : list) {
        if (!item.is_object() || item.size() != 3 || !item.contains("from") ||
            !item.contains("to") || !item.contains(value_key) || !item[value_key].is_number())
            throw InvalidInput("each segment is {\"from\": \"HH:MM\", \"to\": \"HH:MM\", \"" +
                               value_key + "\": number}");
        out.push_back({clock_of(item["from"]), clock_of(item["to"]), item[value_key].get<double>()});
    }
    return out;
}

ClockWindow parse_window(const json& v) {
    if (!v.is_array() || v.size() != 2)
        throw InvalidInput("window must be [\"HH:MM\", \"HH:MM\"]");
    return {clock_of(v[0]), clock_of(v[1])};
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::optional<Profile> parse_profile_source(Section& s, ProfileKind kind, const TimeGrid& grid,
                                            const std::filesystem::path& base) {
    if (!s.valid()) return std::nullopt;
    const json* segments = s.get("segments");
    const json* file = s.get("file");
    const json* irradiance = kind == ProfileKind::PvProduction ? s.get("irradiance_file") : nullptr;
    double area = 0.0, efficiency = 0.0;
    if (kind == ProfileKind::PvProduction) {
        area = s.number("panel_area_m2", 0.0);
        efficiency = s.number("panel_efficiency", 0.0);
    }
    const int sources = (segments != nullptr) + (file != nullptr) + (irradiance != nullptr);
    if (sources != 1) {
        s.problem("", kind == ProfileKind::PvProduction
                          ? "give exactly one of segments, file or irradiance_file"
                          : "give exactly one of segments or file");
        return std::nullopt;
    }
    if (!irradiance && (s.has("panel_area_m2") || s.has("panel_efficiency")))
        s.problem("", "panel parameters only apply with irradiance_file");

    std::optional<Profile> out;
    if (segments) {
        s.guard("segments", [&] { out = synth_profile(kind, parse_segments(*segments, "kw"), grid); });
    } else if (file) {
        s.guard("file", [&] {
            if (!file->is_string()) throw InvalidInput("must be a path string");
            out = load_profile(resolve_path(base, file->get<std::string>()), kind, grid);
        });
    } else {
        s.guard("irradiance_file", [&] {
            if (!irradiance->is_string()) throw InvalidInput("must be a path string");
            const auto w = load_slot_series(resolve_path(base, irradiance->get<std::string>()), grid);
            out = irradiance_to_power(w, area, efficiency);
        });
    }
    return out;
}

FleetConfig parse_fleet_section(Section& s, const FleetConfig& defaults) {
    FleetConfig c = defaults;
    c.n_evs = s.integer("n_evs", c.n_evs);
    const json* seed = s.get("seed");
    if (seed) {
        if (seed->is_number_unsigned()) c.seed = seed->get<std::uint64_t>();
        else s.problem("seed", "must be a non-negative integer");
    }
    if (const json* w = s.get("arrival_window"))
        s.guard("arrival_window", [&] { c.arrival = parse_window(*w); });
    if (const json* w = s.get("departure_window"))
        s.guard("departure_window", [&] { c.departure = parse_window(*w); });
    c.arrival_mean_h = s.number("arrival_mean_h", c.arrival_mean_h);
    c.arrival_std_h = s.number("arrival_std_h", c.arrival_std_h);
    c.departure_mean_h = s.number("departure_mean_h", c.departure_mean_h);
    c.departure_std_h = s.number("departure_std_h", c.departure_std_h);
    c.soc_mean = s.number("soc_mean", c.soc_mean);
    c.soc_std = s.number("soc_std", c.soc_std);
    c.mode_split = s.number("mode_split", c.mode_split);
    c.capacity_kwh = s.number("capacity_kwh", c.capacity_kwh);
    c.target_soc = s.number("target_soc", c.target_soc);
    c.soc_min = s.number("soc_min", c.soc_min);
    c.soc_max = s.number("soc_max", c.soc_max);
    c.charge_efficiency = s.number("charge_efficiency", c.charge_efficiency);
    c.discharge_efficiency = s.number("discharge_efficiency", c.discharge_efficiency);
    s.guard("", [&] { c.validate(); });
    return c;
}

} // namespace

FleetConfig parse_fleet_config(std::string_view json_text) {
    Problems problems;
    const json doc = parse_strict(json_text, problems);
    Section s(&doc, "", problems);
    FleetConfig c = parse_fleet_section(s, FleetConfig{});
    s.finish();
    if (!problems.empty()) throw ScenarioError(std::move(problems));
    return c;
}

FleetConfig load_fleet_config(const std::filesystem::path& path) {
    return parse_fleet_config(read_text(path));
}

ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
    Problems problems;
    const json doc = parse_strict(json_text, problems);
    Section root(&doc, "", problems);
    if (!root.valid()) throw ScenarioError(std::move(problems));

    ScenarioConfig sc;
    if (const json* tg = root.get("time_grid")) {
        Section s(tg, "time_grid", problems);
        const int n = s.integer("slots_per_day", 96);
        s.guard("slots_per_day", [&] { sc.grid = TimeGrid::make(n); });
        s.finish();
    }

    bool have_base = false, have_pv = false, have_fleet = false;
    {
        Section s(root.require("base_load"), "base_load", problems);
        if (auto p = parse_profile_source(s, ProfileKind::BaseLoad, sc.grid, base_dir)) {
            sc.base_load = std::move(*p);
            have_base = true;
        }
        s.finish();
    }
    {
        Section s(root.require("pv"), "pv", problems);
        if (auto p = parse_profile_source(s, ProfileKind::PvProduction, sc.grid, base_dir)) {
            sc.pv = std::move(*p);
            have_pv = true;
        }
        s.finish();
    }
    {
        const json* t = root.get("tariff");
        Section s(t, "tariff", problems);
        std::vector<Segment> windows = default_dr_windows();
        if (const json* w = s.get("grid_windows"))
            s.guard("grid_windows", [&] { windows = parse_segments(*w, "rate"); });
        std::vector<double> pv_rate(sc.grid.slots_per_day, 0.09);
        const json* constant = s.get("pv_rate");
        const json* file = s.get("pv_rate_file");
        if (constant && file) {
            s.problem("", "pv_rate and pv_rate_file are mutually exclusive");
        } else if (constant) {
            if (constant->is_number())
                pv_rate.assign(sc.grid.slots_per_day, constant->get<double>());
            else
                s.problem("pv_rate", "must be a number");
        } else if (file) {
            s.guard("pv_rate_file", [&] {
                if (!file->is_string()) throw InvalidInput("must be a path string");
                pv_rate = load_slot_series(resolve_path(base_dir, file->get<std::string>()), sc.grid);
            });
        }
        s.guard("", [&] { sc.tariffs = make_tariff(windows, pv_rate, sc.grid); });
        s.finish();
    }
    {
        Section s(root.require("fleet"), "fleet", problems);
        if (s.valid()) {
            if (const json* file = s.get("file")) {
                const double eta_c = s.number("charge_efficiency", 1.0);
                const double eta_d = s.number("discharge_efficiency", 1.0);
                s.guard("file", [&] {
                    if (!file->is_string()) throw InvalidInput("must be a path string");
                    sc.fleet = load_fleet(resolve_path(base_dir, file->get<std::string>()), eta_c, eta_d);
                    have_fleet = true;
                });
            } else {
                const std::size_t before = problems.size();
                FleetConfig c = parse_fleet_section(s, FleetConfig{});
                if (problems.size() == before) {
                    s.guard("", [&] {
                        sc.fleet = sample_fleet(c, sc.grid);
                        sc.fleet_config = c;
                        have_fleet = true;
                    });
                }
            }
        }
        s.finish();
    }
    {
        Section s(root.get("policy"), "policy", problems);
        s.guard("method", [&] { sc.policy.method = parse_method(s.string("method", "proposed")); });
        if (const json* f = s.get("flag_power")) {
            if (f->is_string() && f->get<std::string>() == "auto") {
                sc.flag_power_auto = true;
            } else if (f->is_number()) {
                sc.flag_power_auto = false;
                sc.policy.flag_power_kw = f->get<double>();
            } else {
                s.problem("flag_power", "must be \"auto\" or a number");
            }
        }
        sc.policy.urgency_margin = s.integer("urgency_margin", 0);
        if (sc.policy.urgency_margin < 0) s.problem("urgency_margin", "must be >= 0");
        s.finish();
    }
    root.guard("accounting", [&] {
        sc.dispatch.accounting = parse_accounting(root.string("accounting", "offset_and_sell"));
    });
    root.guard("pv_merit", [&] { sc.dispatch.pv_merit = parse_pv_merit(root.string("pv_merit", "always")); });
    if (const json* cap = root.get("grid_cap_kw"); cap && !cap->is_null()) {
        if (cap->is_number() && cap->get<double>() > 0.0) sc.dispatch.grid_cap_kw = cap->get<double>();
        else root.problem("grid_cap_kw", "must be a positive number or null");
    }
    sc.uncontrolled_without_pv = root.boolean("uncontrolled_without_pv", false);
    if (const json* out = root.get("output_dir")) {
        if (out->is_string()) sc.output_dir = resolve_path(base_dir, out->get<std::string>()).string();
        else root.problem("output_dir", "must be a string");
    }
    root.finish();

    if (problems.empty() && have_base && have_pv && have_fleet) {
        root.guard("", [&] {
            resolve(sc);
            validate(sc);
        });
    }
    if (!problems.empty()) throw ScenarioError(std::move(problems));
    return sc;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const ParseError& e) {
        throw ScenarioError(e.what());
    }
    return parse_scenario(text, path.parent_path());
}

} // namespace evmg
