#include "mdsample/config.hpp"

#include <cmath>
#include <set>

namespace mdsample {

using nlohmann::json;

namespace {

void rejectUnknown(const json& obj, const std::string& path, const std::set<std::string>& allowed)
{
    if (!obj.is_object())
        throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
}

template <class T>
T read(const json& obj, const std::string& section, const std::string& key, T fallback)
{
    auto it = obj.find(key);
    if (it == obj.end())
        return fallback;
    try {
        return it->template get<T>();
    } catch (const json::exception&) {
        throw ConfigError(section + "." + key, "wrong type");
    }
}

double readPositive(const json& obj, const std::string& section, const std::string& key, double fallback)
{
    const double v = read<double>(obj, section, key, fallback);
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(section + "." + key, "must be positive and finite");
    return v;
}

Complex readComplex(const json& value, const std::string& field)
{
    if (value.is_number())
        return value.get<double>();
    if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
        return {value[0].get<double>(), value[1].get<double>()};
    throw ConfigError(field, "expected a number or [re, im]");
}

json complexToJson(Complex c)
{
    if (c.imag() == 0.0)
        return c.real();
    return json::array({c.real(), c.imag()});
}

std::string ruleName(RuleKind k)
{
    switch (k) {
    case RuleKind::Exact: return "exact";
    case RuleKind::Differential: return "differential";
    case RuleKind::Falsified: return "falsified";
    }
    return "exact";
}

} // namespace

ExperimentConfig parseConfig(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("document", std::string("malformed JSON: ") + e.what());
    }
    rejectUnknown(doc, "", {"dilation", "generator", "operator", "signal", "rule", "study"});
    ExperimentConfig cfg;

    if (!doc.contains("dilation"))
        throw ConfigError("dilation", "required");
    try {
        cfg.dilation = doc["dilation"].get<std::vector<std::vector<std::int64_t>>>();
    } catch (const json::exception&) {
        throw ConfigError("dilation", "expected integer matrix rows");
    }
    std::size_t d = 0;
    try {
        d = newDilation(cfg.dilation).dimension();
    } catch (const std::domain_error& e) {
        throw ConfigError("dilation", e.what());
    }

    if (!doc.contains("generator"))
        throw ConfigError("generator", "required");
    const json& gen = doc["generator"];
    rejectUnknown(gen, "generator", {"family", "params", "target_order"});
    try {
        cfg.generator.family = parseFamily(read<std::string>(gen, "generator", "family", ""));
    } catch (const std::domain_error& e) {
        throw ConfigError("generator.family", e.what());
    }
    if (auto it = gen.find("params"); it != gen.end()) {
        if (it->is_string()) {
            if (it->get<std::string>() != "calibrate")
                throw ConfigError("generator.params", "expected an object or \"calibrate\"");
            cfg.generator.calibrate = true;
        } else if (it->is_object()) {
            for (const auto& [key, value] : it->items())
                cfg.generator.params[key] = readComplex(value, "generator.params." + key);
        } else {
            throw ConfigError("generator.params", "expected an object or \"calibrate\"");
        }
    }
    if (gen.contains("target_order")) {
        const int n = read<int>(gen, "generator", "target_order", 0);
        if (n < 1 || n > 5)
            throw ConfigError("generator.target_order", "must lie in [1, 5]");
        cfg.generator.target_order = n;
    }

    if (doc.contains("operator")) {
        const json& op = doc["operator"];
        rejectUnknown(op, "operator", {"kind", "N", "h"});
        const std::string kind = read<std::string>(op, "operator", "kind", "delta");
        if (kind == "delta") {
            cfg.op.kind = OperatorSpec::Kind::Delta;
            if (op.contains("N") || op.contains("h"))
                throw ConfigError("operator", "delta operator takes no N or h");
        } else if (kind == "ball") {
            cfg.op.kind = OperatorSpec::Kind::Ball;
            cfg.op.N = read<int>(op, "operator", "N", -1);
            if (cfg.op.N < 0 || cfg.op.N > 4)
                throw ConfigError("operator.N", "required, in [0, 4]");
            if (!op.contains("h"))
                throw ConfigError("operator.h", "required for a ball operator");
            cfg.op.h = readPositive(op, "operator", "h", 0.0);
        } else {
            throw ConfigError("operator.kind", "expected \"delta\" or \"ball\"");
        }
    }

    if (!doc.contains("signal"))
        throw ConfigError("signal", "required");
    {
        const json& sig = doc["signal"];
        rejectUnknown(sig, "signal", {"kind", "offset"});
        cfg.signal.kind = read<std::string>(sig, "signal", "kind", "gaussian");
        cfg.signal.offset = read<double>(sig, "signal", "offset", 0.0);
        try {
            signals::byName(cfg.signal.kind, d, cfg.signal.offset);
        } catch (const std::domain_error& e) {
            throw ConfigError("signal.kind", e.what());
        }
    }

    if (doc.contains("rule")) {
        const json& rule = doc["rule"];
        rejectUnknown(rule, "rule", {"kind", "h"});
        const std::string kind = read<std::string>(rule, "rule", "kind", "exact");
        if (kind == "exact")
            cfg.rule.kind = RuleKind::Exact;
        else if (kind == "differential")
            cfg.rule.kind = RuleKind::Differential;
        else if (kind == "falsified")
            cfg.rule.kind = RuleKind::Falsified;
        else
            throw ConfigError("rule.kind", "expected \"exact\", \"differential\" or \"falsified\"");
        if (rule.contains("h")) {
            if (cfg.rule.kind != RuleKind::Falsified)
                throw ConfigError("rule.h", "only the falsified rule takes a radius");
            cfg.rule.h = readPositive(rule, "rule", "h", 0.0);
        }
    }
    if (cfg.rule.kind == RuleKind::Falsified) {
        if (!cfg.rule.h)
            throw ConfigError("rule.h", "required for the falsified rule");
        if (cfg.op.kind == OperatorSpec::Kind::Ball && std::abs(cfg.op.h - *cfg.rule.h) > 1e-15)
            throw ConfigError("rule.h", "must equal operator.h for a ball operator");
    }

    if (doc.contains("study")) {
        const json& st = doc["study"];
        rejectUnknown(st, "study",
                      {"j_min", "j_max", "p", "domain_halfwidth", "grid_per_scale", "truncation_tol", "quad_order",
                       "fit_skip", "slope_tolerance", "seed"});
        StudySpec& s = cfg.study;
        s.j_min = read<int>(st, "study", "j_min", s.j_min);
        s.j_max = read<int>(st, "study", "j_max", s.j_max);
        if (auto it = st.find("p"); it != st.end()) {
            const std::string p = it->is_string() ? it->get<std::string>() : it->dump();
            if (p == "2")
                s.p = 2.0;
            else if (p == "inf")
                s.p = std::numeric_limits<double>::infinity();
            else
                throw ConfigError("study.p", "expected \"2\" or \"inf\"");
        }
        if (st.contains("domain_halfwidth"))
            s.domain_halfwidth = readPositive(st, "study", "domain_halfwidth", 1.0);
        s.grid_per_scale = readPositive(st, "study", "grid_per_scale", s.grid_per_scale);
        s.truncation_tol = readPositive(st, "study", "truncation_tol", s.truncation_tol);
        s.quad_order = read<int>(st, "study", "quad_order", s.quad_order);
        s.fit_skip = read<int>(st, "study", "fit_skip", s.fit_skip);
        s.slope_tolerance = readPositive(st, "study", "slope_tolerance", s.slope_tolerance);
        s.seed = read<std::uint64_t>(st, "study", "seed", s.seed);
    }
    if (cfg.study.j_min < 0)
        throw ConfigError("study.j_min", "must be non-negative");
    if (cfg.study.j_max <= cfg.study.j_min)
        throw ConfigError("study.j_max", "must exceed j_min");
    if (cfg.study.j_max > 12)
        throw ConfigError("study.j_max", "must not exceed 12");
    if (cfg.study.quad_order < 1 || cfg.study.quad_order > 64)
        throw ConfigError("study.quad_order", "must lie in [1, 64]");
    if (cfg.study.fit_skip < 0)
        throw ConfigError("study.fit_skip", "must be non-negative");

    if (!cfg.generator.calibrate) {
        try {
            makeExample(cfg.generator.family, d, cfg.generator.params);
        } catch (const std::domain_error& e) {
            throw ConfigError("generator", e.what());
        }
    }
    return cfg;
}

json toJson(const ExperimentConfig& cfg)
{
    json out;
    out["dilation"] = cfg.dilation;

    json gen;
    gen["family"] = familyName(cfg.generator.family);
    if (cfg.generator.calibrate) {
        gen["params"] = "calibrate";
    } else {
        json params = json::object();
        for (const auto& [k, v] : cfg.generator.params)
            params[k] = complexToJson(v);
        gen["params"] = params;
    }
    if (cfg.generator.target_order)
        gen["target_order"] = *cfg.generator.target_order;
    out["generator"] = gen;

    if (cfg.op.kind == OperatorSpec::Kind::Delta)
        out["operator"] = {{"kind", "delta"}};
    else
        out["operator"] = {{"kind", "ball"}, {"N", cfg.op.N}, {"h", cfg.op.h}};

    out["signal"] = {{"kind", cfg.signal.kind}, {"offset", cfg.signal.offset}};

    json rule = {{"kind", ruleName(cfg.rule.kind)}};
    if (cfg.rule.h)
        rule["h"] = *cfg.rule.h;
    out["rule"] = rule;

    const StudySpec& s = cfg.study;
    json st = {{"j_min", s.j_min},
               {"j_max", s.j_max},
               {"p", std::isinf(s.p) ? "inf" : "2"},
               {"grid_per_scale", s.grid_per_scale},
               {"truncation_tol", s.truncation_tol},
               {"quad_order", s.quad_order},
               {"fit_skip", s.fit_skip},
               {"slope_tolerance", s.slope_tolerance},
               {"seed", s.seed}};
    if (s.domain_halfwidth)
        st["domain_halfwidth"] = *s.domain_halfwidth;
    out["study"] = st;
    return out;
}

DilationMatrix buildDilation(const ExperimentConfig& cfg)
{
    return newDilation(cfg.dilation);
}

DiffOperator buildOperator(const ExperimentConfig& cfg)
{
    const std::size_t d = cfg.dilation.size();
    if (cfg.op.kind == OperatorSpec::Kind::Ball)
        return ballMoments(d, cfg.op.N, cfg.op.h);
    return deltaOperator(d);
}

Signal buildSignal(const ExperimentConfig& cfg)
{
    return signals::byName(cfg.signal.kind, cfg.dilation.size(), cfg.signal.offset);
}

QuadratureSpec buildQuadrature(const ExperimentConfig& cfg)
{
    QuadratureSpec q;
    q.order = cfg.study.quad_order;
    q.seed = cfg.study.seed;
    return q;
}

CoefficientRule buildRule(const ExperimentConfig& cfg)
{
    switch (cfg.rule.kind) {
    case RuleKind::Exact: return CoefficientRule::exact();
    case RuleKind::Differential: return CoefficientRule::differential(buildOperator(cfg));
    case RuleKind::Falsified: return CoefficientRule::falsified(*cfg.rule.h, buildQuadrature(cfg));
    }
    return CoefficientRule::exact();
}

ResolvedGenerator buildGenerator(const ExperimentConfig& cfg)
{
    const std::size_t d = cfg.dilation.size();
    if (!cfg.generator.calibrate)
        return {makeExample(cfg.generator.family, d, cfg.generator.params), std::nullopt};
    // The declared order of the uncalibrated family sets the default target.
    ParameterMap zeros;
    for (const auto& name : affineParameters(cfg.generator.family))
        zeros[name] = 0.0;
    const int declared = makeExample(cfg.generator.family, d, zeros).declared_sf_order;
    const int n = cfg.generator.target_order.value_or(std::min(declared, 5));
    CalibrationResult cal = solveFreeParams(cfg.generator.family, d, buildOperator(cfg), n);
    Generator g = makeExample(cfg.generator.family, d, cal.params);
    return {std::move(g), std::move(cal)};
}

} // namespace mdsample
