#include "splitkit/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace splitkit {

using nlohmann::json;

namespace {

template <class T> void read_field(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

} // namespace

Config Config::from_json_text(const std::string &text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be an object");

    Config c;
    read_field(j, "seed", c.seed);
    read_field(j, "feasibility_tol", c.feasibility_tol);
    read_field(j, "infeasibility_floor", c.infeasibility_floor);
    read_field(j, "starts_e1", c.starts_e1);
    read_field(j, "starts_e2", c.starts_e2);
    read_field(j, "starts_e3", c.starts_e3);
    read_field(j, "starts_recovery", c.starts_recovery);
    read_field(j, "nm_max_evals", c.nm_max_evals);
    read_field(j, "threads", c.threads);
    read_field(j, "tau0", c.tau0);
    read_field(j, "tau_count", c.tau_count);
    read_field(j, "stiff_grid", c.stiff_grid);
    read_field(j, "cap_autonomous", c.cap_autonomous);
    read_field(j, "cap_k1", c.cap_k1);
    read_field(j, "cap_k2", c.cap_k2);
    read_field(j, "format", c.format);

    if (c.cap_autonomous > 8 || c.cap_k1 > 10 || c.cap_k2 > 8)
        throw std::invalid_argument("config: caps exceed module limits (8 / 10 / 8)");
    if (c.format != "text" && c.format != "json" && c.format != "csv")
        throw std::invalid_argument("config: format must be text, json or csv");
    if (c.tau_count < 4)
        throw std::invalid_argument("config: tau_count must be >= 4");
    if (c.stiff_grid < 16)
        throw std::invalid_argument("config: stiff_grid must be >= 16");
    return c;
}

Config Config::load_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string Config::to_json_text() const
{
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["seed"] = seed;
    j["feasibility_tol"] = feasibility_tol;
    j["infeasibility_floor"] = infeasibility_floor;
    j["starts_e1"] = starts_e1;
    j["starts_e2"] = starts_e2;
    j["starts_e3"] = starts_e3;
    j["starts_recovery"] = starts_recovery;
    j["nm_max_evals"] = nm_max_evals;
    j["threads"] = threads;
    j["tau0"] = tau0;
    j["tau_count"] = tau_count;
    j["stiff_grid"] = stiff_grid;
    j["cap_autonomous"] = cap_autonomous;
    j["cap_k1"] = cap_k1;
    j["cap_k2"] = cap_k2;
    j["format"] = format;
    return j.dump(2) + "\n";
}

} // namespace splitkit
