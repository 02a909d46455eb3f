#include "den/runconfig.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "den/errors.hpp"

namespace den {

namespace {

constexpr std::array kKnownKeys = {
    "mesh.kind", "mesh.subdivisions", "mesh.edge_length",
    "field.beta", "field.modes", "field.real_range", "field.imag_range", "field.seed",
    "field.weight_exponent_sign", "field.resample_on_dst",
    "train.batch_size", "train.epochs", "train.lr", "train.lr_decay_step", "train.lr_decay_rate",
    "train.weight_decay", "train.k_v", "train.gram_epsilon", "train.seed", "train.threads",
    "model.layers", "model.channels", "model.k_pod", "model.mix_rank", "model.bandwidth",
    "model.k_out", "model.basis", "model.mixing", "model.seed",
    "physics.k_squared",
    "experiment.K", "experiment.k_out", "experiment.samples", "experiment.train_fraction",
    "experiment.contour_nodes", "experiment.seeds",
    "paths.mesh", "paths.dst_mesh", "paths.dataset", "paths.basis", "paths.checkpoint",
    "paths.out_dir",
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

void RunConfig::validate_key(const std::string& key) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
        throw ValidationError("unknown config key: " + key);
}

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + " is not key=value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config: " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return from_string(buf.str());
}

void RunConfig::set(const std::string& key, const std::string& value) {
    validate_key(key);
    values_[key] = value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (ec != std::errc{} || p != it->second.data() + it->second.size())
        throw ValidationError("config key " + key + " is not an integer: " + it->second);
    return v;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key " + key + " is not a number: " + it->second);
    }
}

std::vector<std::string> RunConfig::echo() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_) out.push_back(k + "=" + v);
    return out;
}

FieldSpec RunConfig::field_spec() const {
    FieldSpec spec;
    const std::string modes = get_string("field.modes", "1:8");
    const auto colon = modes.find(':');
    if (colon == std::string::npos) throw ValidationError("field.modes must read m:M");
    spec.mode_min = static_cast<int>(std::stoll(modes.substr(0, colon)));
    spec.mode_max = static_cast<int>(std::stoll(modes.substr(colon + 1)));
    spec.beta = get_double("field.beta", 0.5);
    auto parse_range = [&](const std::string& key, double& lo, double& hi) {
        const std::string r = get_string(key, "");
        if (r.empty()) return;
        const auto c = r.find(':');
        if (c == std::string::npos) throw ValidationError(key + " must read lo:hi");
        lo = std::stod(r.substr(0, c));
        hi = std::stod(r.substr(c + 1));
    };
    parse_range("field.real_range", spec.real_lo, spec.real_hi);
    parse_range("field.imag_range", spec.imag_lo, spec.imag_hi);
    spec.seed = static_cast<std::uint64_t>(get_int("field.seed", 0));
    spec.weight_exponent_sign = static_cast<int>(get_int("field.weight_exponent_sign", 1));
    spec.validate();
    return spec;
}

DenConfig RunConfig::den_config() const {
    DenConfig cfg;
    cfg.layers = static_cast<int>(get_int("model.layers", cfg.layers));
    cfg.channels = static_cast<int>(get_int("model.channels", cfg.channels));
    cfg.k_pod = get_int("model.k_pod", cfg.k_pod);
    cfg.mix_rank = static_cast<int>(get_int("model.mix_rank", cfg.mix_rank));
    cfg.bandwidth = static_cast<int>(get_int("model.bandwidth", cfg.bandwidth));
    cfg.k_out = static_cast<int>(get_int("model.k_out", cfg.k_out));
    cfg.basis_kind = basis_kind_from_string(get_string("model.basis", "pod_y"));
    cfg.mixing_kind = mixing_kind_from_string(get_string("model.mixing", "blr"));
    cfg.seed = static_cast<std::uint64_t>(get_int("model.seed", 0));
    cfg.validate();
    return cfg;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig cfg;
    cfg.batch_size = static_cast<int>(get_int("train.batch_size", cfg.batch_size));
    cfg.epochs = static_cast<int>(get_int("train.epochs", cfg.epochs));
    cfg.lr = get_double("train.lr", cfg.lr);
    cfg.lr_decay_step = static_cast<int>(get_int("train.lr_decay_step", cfg.lr_decay_step));
    cfg.lr_decay_rate = get_double("train.lr_decay_rate", cfg.lr_decay_rate);
    cfg.weight_decay = get_double("train.weight_decay", cfg.weight_decay);
    cfg.k_v = get_int("train.k_v", cfg.k_v);
    cfg.gram_epsilon = get_double("train.gram_epsilon", cfg.gram_epsilon);
    cfg.seed = static_cast<std::uint64_t>(get_int("train.seed", 0));
    cfg.threads = static_cast<int>(get_int("train.threads", 0));
    return cfg;
}

}  // namespace den
