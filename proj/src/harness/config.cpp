#include "dkn/harness/config.hpp"

#include "dkn/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dkn {

using nlohmann::json;

void validate(const ExperimentConfig& c)
{
    auto fail = [](const std::string& field, const std::string& why) {
        throw Error(Errc::ConfigInvalid, "field '" + field + "': " + why);
    };
    if (c.p == 0) {
        fail("p", "must be positive");
    }
    if (c.n < 4) {
        fail("n", "must be at least 4");
    }
    if (c.nonnulls * (c.spacing + 1) > c.p) {
        fail("nonnulls", "nonnulls*(spacing+1) exceeds p");
    }
    if (!(c.alpha_kn > 0.0 && c.alpha_kn < 1.0)) {
        fail("alpha_kn", "must lie in (0, 1)");
    }
    if (!(c.alpha_ebh > 0.0 && c.alpha_ebh < 1.0)) {
        fail("alpha_ebh", "must lie in (0, 1)");
    }
    if (!(c.offset_c >= 1.0)) {
        fail("offset_c", "must be at least 1 for valid e-values");
    }
    if (!(c.rho > -1.0 && c.rho < 1.0)) {
        fail("rho", "must lie in (-1, 1)");
    }
    if (!std::isfinite(c.amplitude)) {
        fail("amplitude", "must be finite");
    }
    if (c.runs == 0) {
        fail("M", "must be at least 1");
    }
    if (c.datasets == 0) {
        fail("D", "must be at least 1");
    }
    if (c.reruns == 0) {
        fail("K", "must be at least 1");
    }
    if (c.cv_folds < 2 || c.cv_folds > c.n) {
        fail("cv_folds", "must lie in [2, n]");
    }
    if (c.cv_grid == 0) {
        fail("cv_grid", "must be positive");
    }
    if (c.methods.empty()) {
        fail("methods", "must name at least one method");
    }
    for (const auto& m : c.methods) {
        if (m != "original" && m != "derandomized") {
            fail("methods", "unknown method '" + m + "'");
        }
    }
    if (std::set<std::string>(c.methods.begin(), c.methods.end()).size() != c.methods.size()) {
        fail("methods", "duplicate method");
    }
}

std::vector<std::string> experiment_preset_names()
{
    return {"linear_desk", "linear_full", "logistic_desk", "logistic_full"};
}

ExperimentConfig experiment_preset(std::string_view name)
{
    ExperimentConfig c;
    if (name == "linear_desk") {
        return c;
    }
    if (name == "linear_full") {
        c.name = "linear_full";
        c.scale = "full";
        c.n = 1000;
        c.p = 800;
        c.nonnulls = 80;
        c.spacing = 9;
        c.runs = 50;
        c.datasets = 100;
        c.reruns = 20;
        return c;
    }
    if (name == "logistic_desk") {
        c.name = "logistic_desk";
        c.family = Family::logistic;
        c.n = 300;
        c.p = 60;
        c.nonnulls = 5;
        c.spacing = 11;
        c.amplitude = 20.0;
        c.datasets = 20;
        return c;
    }
    if (name == "logistic_full") {
        c.name = "logistic_full";
        c.scale = "full";
        c.family = Family::logistic;
        c.n = 1000;
        c.p = 600;
        c.nonnulls = 50;
        c.spacing = 11;
        c.amplitude = 20.0;
        c.runs = 50;
        c.datasets = 100;
        c.reruns = 20;
        return c;
    }
    throw Error(Errc::ConfigInvalid, "unknown preset '" + std::string(name) + "'");
}

namespace {

template <class T>
T field(const json& j, const std::string& key)
{
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw Error(Errc::ConfigInvalid, "field '" + key + "': wrong type");
    }
}

std::size_t count_field(const json& j, const std::string& key)
{
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        throw Error(Errc::ConfigInvalid, "field '" + key + "': expected a nonnegative integer");
    }
    return j.get<std::size_t>();
}

double real_field(const json& j, const std::string& key)
{
    if (!j.is_number()) {
        throw Error(Errc::ConfigInvalid, "field '" + key + "': expected a number");
    }
    return j.get<double>();
}

} // namespace

ExperimentConfig parse_experiment_config(const json& j)
{
    if (!j.is_object()) {
        throw Error(Errc::ConfigInvalid, "config must be a JSON object");
    }
    ExperimentConfig c;
    if (j.contains("preset")) {
        if (!j.at("preset").is_string()) {
            throw Error(Errc::ConfigInvalid, "field 'preset': expected a string");
        }
        c = experiment_preset(j.at("preset").get<std::string>());
    }
    for (const auto& [key, v] : j.items()) {
        if (key == "preset") {
            continue;
        } else if (key == "name") {
            c.name = field<std::string>(v, key);
        } else if (key == "scale") {
            c.scale = field<std::string>(v, key);
        } else if (key == "n") {
            c.n = count_field(v, key);
        } else if (key == "p") {
            c.p = count_field(v, key);
        } else if (key == "family") {
            try {
                c.family = parse_family(field<std::string>(v, key));
            } catch (const Error& e) {
                throw Error(Errc::ConfigInvalid, "field 'family': " + std::string(e.what()));
            }
        } else if (key == "amplitude") {
            c.amplitude = real_field(v, key);
        } else if (key == "spacing") {
            c.spacing = count_field(v, key);
        } else if (key == "nonnulls") {
            c.nonnulls = count_field(v, key);
        } else if (key == "rho") {
            c.rho = real_field(v, key);
        } else if (key == "alpha_kn") {
            c.alpha_kn = real_field(v, key);
        } else if (key == "alpha_ebh") {
            c.alpha_ebh = real_field(v, key);
        } else if (key == "offset_c") {
            c.offset_c = real_field(v, key);
        } else if (key == "early_stop") {
            if (!v.is_boolean()) {
                throw Error(Errc::ConfigInvalid, "field 'early_stop': expected a boolean");
            }
            c.early_stop = v.get<bool>();
        } else if (key == "M") {
            c.runs = count_field(v, key);
        } else if (key == "D") {
            c.datasets = count_field(v, key);
        } else if (key == "K") {
            c.reruns = count_field(v, key);
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) {
                throw Error(Errc::ConfigInvalid, "field 'seed': expected a nonnegative integer");
            }
            c.seed = v.get<std::uint64_t>();
        } else if (key == "methods") {
            c.methods = field<std::vector<std::string>>(v, key);
        } else if (key == "cv_folds") {
            c.cv_folds = count_field(v, key);
        } else if (key == "cv_grid") {
            c.cv_grid = count_field(v, key);
        } else {
            throw Error(Errc::ConfigInvalid, "unknown key '" + key + "'");
        }
    }
    validate(c);
    return c;
}

ExperimentConfig parse_experiment_config_text(std::string_view text)
{
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw Error(Errc::ConfigInvalid, "malformed JSON at line " + std::to_string(line));
    }
    return parse_experiment_config(j);
}

ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::FileUnreadable, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config_text(buf.str());
}

json to_json(const ExperimentConfig& c)
{
    return json{{"name", c.name},
                {"scale", c.scale},
                {"n", c.n},
                {"p", c.p},
                {"family", std::string(to_string(c.family))},
                {"amplitude", c.amplitude},
                {"spacing", c.spacing},
                {"nonnulls", c.nonnulls},
                {"rho", c.rho},
                {"alpha_kn", c.alpha_kn},
                {"alpha_ebh", c.alpha_ebh},
                {"offset_c", c.offset_c},
                {"early_stop", c.early_stop},
                {"M", c.runs},
                {"D", c.datasets},
                {"K", c.reruns},
                {"seed", c.seed},
                {"methods", c.methods},
                {"cv_folds", c.cv_folds},
                {"cv_grid", c.cv_grid}};
}

} // namespace dkn
