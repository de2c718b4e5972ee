#include "cli.hpp"

#include <CLI11.hpp>
#include <functional>
#include <map>
#include <sstream>

namespace dglift::cli {

using nlohmann::json;

namespace {

bool is_leaf(const json& j) {
  if (!j.is_structured()) return true;
  // Arrays of scalars or of small tuples stay on one line.
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const json& x) {
           return !x.is_structured() ||
                  (x.is_array() && std::all_of(x.begin(), x.end(), [](const json& y) { return !y.is_structured(); }));
         });
}

std::string scalar_text(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void render(std::ostringstream& os, const json& j, int indent) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (is_leaf(v)) {
        os << pad << k << ": " << scalar_text(v) << "\n";
      } else {
        os << pad << k << ":\n";
        render(os, v, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (is_leaf(v)) {
        os << pad << "- " << scalar_text(v) << "\n";
      } else {
        os << pad << "-\n";
        render(os, v, indent + 2);
      }
    }
  } else {
    os << pad << scalar_text(j) << "\n";
  }
}

std::string headline(const json& report, const json& m) {
  const std::string cmd = report.value("command", "");
  if (cmd == "omega" && m.contains("power")) {
    const std::string what = m["power"] == 1 ? "omega" : "chi^" + m["power"].dump();
    return m["null_homotopic"].get<bool>() ? what + " = 0, witness stored" : what + " != 0";
  }
  if (cmd == "battery") {
    std::string s = m["all_agree"].get<bool>() ? "all nine verdicts agree" : "verdicts differ";
    if (m["ar1"]["holds"].get<bool>()) s += " (AR1 holds)";
    return s;
  }
  if (cmd == "check" && m.contains("ar1") && m.contains("ar2")) {
    auto yn = [](const json& x) { return x["holds"].get<bool>() ? std::string("holds") : std::string("fails"); };
    return "AR1 " + yn(m["ar1"]) + ", AR2 " + yn(m["ar2"]);
  }
  return "";
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  os << report.value("command", "") << " " << report.value("instance", "") << " [" << report.value("backend", "")
     << "]\n";
  json rest = report;
  rest.erase("command");
  rest.erase("instance");
  rest.erase("backend");
  if (rest.contains("modules")) {
    for (const auto& m : rest["modules"]) {
      const std::string head = headline(report, m);
      os << "module " << m.value("name", "") << (head.empty() ? ":" : ": " + head) << "\n";
      json body = m;
      body.erase("name");
      if (report.value("command", "") == "battery") {
        for (const auto& c : body["conditions"])
          os << "  (" << c["label"].get<std::string>() << ") " << (c["value"].get<bool>() ? "true " : "false") << "  "
             << c["condition"].get<std::string>() << "  [" << c["note"].get<std::string>() << "]\n";
        body.erase("conditions");
      }
      render(os, body, 2);
    }
    rest.erase("modules");
  }
  json violations = rest["violations"];
  rest.erase("violations");
  rest.erase("status");
  render(os, rest, 0);
  for (const auto& v : violations) os << "VIOLATION: " << v.get<std::string>() << "\n";
  os << "status: " << report.value("status", "") << "\n";
  return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks for naive liftability of semifree DG modules"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string field_spec = "Q";
  std::optional<int> max_degree, max_tensor, lbound;
  bool as_json = false;
  Settings settings;
  std::string path;

  app.add_option("--field", field_spec, "Coefficient field: Q or Fp:<p>");
  app.add_option("--max-degree", max_degree, "DG degree cap (default: file, else 16)");
  app.add_option("--max-tensor", max_tensor, "Tensor degree cap (default: file, else 4)");
  app.add_option("--lbound", lbound, "Bound L for the battery and Gamma (default: file, else 4)");
  app.add_flag("--json", as_json, "Print the machine report");

  using Runner = std::function<Outcome(const Instance&, const Settings&)>;
  const std::vector<std::tuple<std::string, std::string, Runner>> commands = {
      {"check", "Validate an instance and report AR1, AR2 and homology", run_check},
      {"hom", "dim Hom_K(N, Sigma^s M) with class representatives", run_hom},
      {"omega", "Decide whether omega (or chi^n) vanishes", run_omega},
      {"battery", "Evaluate the nine liftability conditions", run_battery},
      {"gamma", "Gamma dimensions, omega action ranks and the kernel sequence", run_gamma},
      {"appendix", "Negative-shift vanishing and the explicit Koszul class", run_appendix},
  };
  std::map<CLI::App*, std::pair<std::string, Runner>> dispatch;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("instance", path, "Instance file")->required();
    sub->add_option("--module", settings.module, "Restrict to one module");
    if (name == "hom") {
      sub->add_option("--target", settings.target, "Target module (default: the source)");
      sub->add_option("--shift", settings.shift, "Shift s in Sigma^s M");
    }
    if (name == "omega") sub->add_option("--n", settings.power, "Power of chi to test (default 1)");
    dispatch.emplace(sub, std::make_pair(name, fn));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    settings.field = Field::parse(field_spec);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto& [name, runner] = dispatch.at(app.get_subcommands().front());
  try {
    ParseOptions popts;
    popts.field = settings.field;
    popts.max_degree = max_degree;
    const Instance inst = load_instance(path, popts);
    settings.max_degree = inst.modules.front().module.max_degree();
    settings.max_tensor = max_tensor.value_or(inst.limits.max_tensor.value_or(kDefaultMaxTensor));
    settings.lbound = lbound.value_or(inst.limits.lbound.value_or(kDefaultLiftBound));
    if (settings.lbound < 1 || settings.max_tensor < 1) {
      err << "error: --lbound and --max-tensor must be positive\n";
      return kExitUsage;
    }

    Outcome o = runner(inst, settings);
    json report = std::move(o.report);
    report["command"] = name;
    report["instance"] = path;
    report["backend"] = settings.field.name();
    report["limits"] = {{"max_degree", settings.max_degree}, {"max_tensor", settings.max_tensor},
                        {"lbound", settings.lbound}};
    report["violations"] = o.violations;
    report["status"] = o.violations.empty() ? "pass" : "fail";
    out << (as_json ? report.dump(2) + "\n" : render_text(report));
    return o.violations.empty() ? kExitPass : kExitViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    // Unreadable or invalid input is a usage problem; anything else is a
    // property the engine could not establish.
    return e.kind() == ErrorKind::InvalidInstance ? kExitUsage : kExitViolation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace dglift::cli
