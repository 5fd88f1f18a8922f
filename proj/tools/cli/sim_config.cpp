#include "sim_config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <string>

#include "panic_lab/error.hpp"

namespace panic_lab::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

template <typename Int>
Int as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (v.is_number_unsigned()) return static_cast<Int>(v.get<std::uint64_t>());
    const auto x = v.get<std::int64_t>();
    if (x < 0) fail(path, "must be >= 0");
    return static_cast<Int>(x);
  } else {
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<Int>::min() ||
        x > std::numeric_limits<Int>::max()) {
      fail(path, "out of range");
    }
    return static_cast<Int>(x);
  }
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

using Setter = std::function<void(const json&, const std::string&)>;

void apply_fields(const json& obj, const std::string& path,
                  const std::map<std::string, Setter>& fields) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const auto it = fields.find(key);
    const std::string where = path + "." + key;
    if (it == fields.end()) fail(where, "unknown key");
    it->second(value, where);
  }
}

sim::ShockEvent parse_shock(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  if (!obj.contains("kind")) fail(path + ".kind", "required");
  sim::ShockEvent e;
  const auto kind = as_string(obj.at("kind"), path + ".kind");
  if (kind == "exogenous") {
    e.kind = sim::ShockKind::kExogenous;
  } else if (kind == "endogenous") {
    e.kind = sim::ShockKind::kEndogenous;
  } else {
    fail(path + ".kind", "expected \"exogenous\" or \"endogenous\"");
  }
  std::map<std::string, Setter> fields{
      {"kind", [](const json&, const std::string&) {}},
      {"start", [&](const json& v, const std::string& p) { e.start = as_integer<int>(v, p); }},
  };
  if (e.kind == sim::ShockKind::kExogenous) {
    fields["duration"] = [&](const json& v, const std::string& p) { e.duration = as_integer<int>(v, p); };
    fields["sigma_shock"] = [&](const json& v, const std::string& p) { e.sigma_shock = as_number(v, p); };
  } else {
    fields["stock_index"] = [&](const json& v, const std::string& p) { e.stock_index = as_integer<int>(v, p); };
    fields["magnitude_std"] = [&](const json& v, const std::string& p) { e.magnitude_std = as_number(v, p); };
  }
  apply_fields(obj, path, fields);
  return e;
}

}  // namespace

SimulateSpec parse_simulate_spec(const json& doc) {
  SimulateSpec spec;
  auto& c = spec.config;
  const auto num = [](double& dst) {
    return Setter([&dst](const json& v, const std::string& p) { dst = as_number(v, p); });
  };
  const auto integer = [](int& dst) {
    return Setter([&dst](const json& v, const std::string& p) { dst = as_integer<int>(v, p); });
  };
  std::map<std::string, Setter> fields{
      {"n_stocks", integer(c.n_stocks)},
      {"n_steps", integer(c.n_steps)},
      {"burn_in", integer(c.burn_in)},
      {"g", num(c.g)},
      {"kappa", num(c.kappa)},
      {"alpha_mem", num(c.alpha_mem)},
      {"n_terms", integer(c.n_terms)},
      {"skew_sign", integer(c.skew_sign)},
      {"sigma0", num(c.sigma0)},
      {"steps_per_year", num(c.steps_per_year)},
      {"vol_floor", num(c.vol_floor)},
      {"b", num(c.b)},
      {"noise_amp", num(c.noise_amp)},
      {"phase_coupling", num(c.phase_coupling)},
      {"sigma_c_window", integer(c.sigma_c_window)},
      {"vol_smooth", integer(c.vol_smooth)},
      {"s_init", num(c.s_init)},
      {"bars_per_session",
       [&](const json& v, const std::string& p) { c.bars_per_session = as_integer<std::size_t>(v, p); }},
      {"seed", [&](const json& v, const std::string& p) { c.seed = as_integer<std::uint64_t>(v, p); }},
      {"feedback_norm",
       [&](const json& v, const std::string& p) {
         const auto s = as_string(v, p);
         if (s == "sigma0") c.feedback_norm = sim::FeedbackNorm::kSigma0;
         else if (s == "stationary") c.feedback_norm = sim::FeedbackNorm::kStationary;
         else fail(p, "expected \"sigma0\" or \"stationary\"");
       }},
      {"coupling_scale",
       [&](const json& v, const std::string& p) {
         const auto s = as_string(v, p);
         if (s == "absolute") c.coupling_scale = sim::CouplingScale::kAbsolute;
         else if (s == "relative") c.coupling_scale = sim::CouplingScale::kRelative;
         else fail(p, "expected \"absolute\" or \"relative\"");
       }},
      {"shocks",
       [&](const json& v, const std::string& p) {
         if (!v.is_array()) fail(p, "expected an array");
         for (std::size_t k = 0; k < v.size(); ++k) {
           spec.shocks.push_back(parse_shock(v[k], p + "[" + std::to_string(k) + "]"));
         }
       }},
  };
  apply_fields(doc, "config", fields);

  try {
    c.validate();
    sim::validate_schedule(c, spec.shocks);
  } catch (const InputError& e) {
    throw InputError(std::string("config.") + e.what());
  }
  return spec;
}

SimulateSpec load_simulate_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config: invalid JSON: " + std::string(e.what()));
  }
  return parse_simulate_spec(doc);
}

json to_json(const SimulateSpec& spec) {
  const auto& c = spec.config;
  json out{
      {"n_stocks", c.n_stocks},
      {"n_steps", c.n_steps},
      {"burn_in", c.burn_in},
      {"g", c.g},
      {"kappa", c.kappa},
      {"alpha_mem", c.alpha_mem},
      {"n_terms", c.n_terms},
      {"skew_sign", c.skew_sign},
      {"sigma0", c.sigma0},
      {"steps_per_year", c.steps_per_year},
      {"vol_floor", c.vol_floor},
      {"feedback_norm", sim::to_string(c.feedback_norm)},
      {"b", c.b},
      {"noise_amp", c.noise_amp},
      {"phase_coupling", c.phase_coupling},
      {"coupling_scale", sim::to_string(c.coupling_scale)},
      {"sigma_c_window", c.sigma_c_window},
      {"vol_smooth", c.vol_smooth},
      {"s_init", c.s_init},
      {"bars_per_session", c.bars_per_session},
      {"seed", c.seed},
  };
  json shocks = json::array();
  for (const auto& e : spec.shocks) {
    json item{{"kind", sim::to_string(e.kind)}, {"start", e.start}};
    if (e.kind == sim::ShockKind::kExogenous) {
      item["duration"] = e.duration;
      item["sigma_shock"] = e.sigma_shock;
    } else {
      item["stock_index"] = e.stock_index;
      item["magnitude_std"] = e.magnitude_std;
    }
    shocks.push_back(std::move(item));
  }
  out["shocks"] = std::move(shocks);
  return out;
}

}  // namespace panic_lab::cli
