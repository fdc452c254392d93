#include "helicity/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "helicity/error.hpp"

namespace helicity {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) { throw ConfigError(ctx + ": " + msg); }

/// Reads one JSON object, records every resolved value (defaults included)
/// and rejects unknown keys on finish().
class Obj {
public:
    Obj(const json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
        if (!j_.is_object()) fail(ctx_, "expected an object");
    }

    std::string type() {
        const json& v = req("type");
        if (!v.is_string()) fail(ctx_, "\"type\" must be a string");
        out_["type"] = v;
        return v.get<std::string>();
    }

    double num(const std::string& key) { return record(key, as_number(req(key), key)); }
    double num(const std::string& key, double def) {
        return record(key, j_.contains(key) ? as_number(use(key), key) : def);
    }
    double positive(const std::string& key) {
        const double v = num(key);
        if (!(v > 0)) fail(ctx_, "\"" + key + "\" must be positive");
        return v;
    }
    int integer(const std::string& key, int def) {
        if (!j_.contains(key)) return record_int(key, def);
        const json& v = use(key);
        if (!v.is_number_integer()) fail(ctx_, "\"" + key + "\" must be an integer");
        return record_int(key, v.get<int>());
    }
    bool boolean(const std::string& key, bool def) {
        bool b = def;
        if (j_.contains(key)) {
            const json& v = use(key);
            if (!v.is_boolean()) fail(ctx_, "\"" + key + "\" must be a boolean");
            b = v.get<bool>();
        }
        out_[key] = b;
        return b;
    }
    Vec3 vec3(const std::string& key) { return record_vec(key, as_vec3(req(key), key)); }
    Vec3 vec3(const std::string& key, const Vec3& def) {
        return record_vec(key, j_.contains(key) ? as_vec3(use(key), key) : def);
    }
    std::optional<Vec3> maybe_vec3(const std::string& key) {
        if (!j_.contains(key)) return std::nullopt;
        return record_vec(key, as_vec3(use(key), key));
    }
    const json& raw(const std::string& key) { return req(key); }
    bool has(const std::string& key) const { return j_.contains(key); }
    void put(const std::string& key, json v) { out_[key] = std::move(v); }

    json finish() {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(ctx_, "unknown key \"" + it.key() + "\"");
        return out_;
    }
    const std::string& ctx() const { return ctx_; }

private:
    const json& req(const std::string& key) {
        if (!j_.contains(key)) fail(ctx_, "missing required key \"" + key + "\"");
        return use(key);
    }
    const json& use(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }
    double as_number(const json& v, const std::string& key) const {
        if (!v.is_number()) fail(ctx_, "\"" + key + "\" must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(ctx_, "\"" + key + "\" must be finite");
        return d;
    }
    Vec3 as_vec3(const json& v, const std::string& key) const {
        if (!v.is_array() || v.size() != 3) fail(ctx_, "\"" + key + "\" must be an array of 3 numbers");
        Vec3 p;
        for (int k = 0; k < 3; ++k) p[k] = as_number(v[k], key);
        return p;
    }
    double record(const std::string& key, double v) {
        out_[key] = v;
        return v;
    }
    int record_int(const std::string& key, int v) {
        out_[key] = v;
        return v;
    }
    Vec3 record_vec(const std::string& key, const Vec3& v) {
        out_[key] = json::array({v.x, v.y, v.z});
        return v;
    }

    const json& j_;
    std::string ctx_;
    json out_ = json::object();
    std::set<std::string> seen_;
};

/// Wraps library validation errors raised while building objects from config.
template <class F>
auto guarded(const std::string& ctx, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        fail(ctx, e.what());
    }
}

Primitive parse_primitive(const json& j, const std::string& ctx, json& resolved) {
    Obj o(j, ctx);
    const std::string t = o.type();
    if (t == "ball") {
        const Vec3 c = o.vec3("center", {});
        const double r = o.positive("radius");
        resolved = o.finish();
        return Ball{c, r};
    }
    if (t == "torus") {
        const Vec3 c = o.vec3("center", {});
        const Vec3 axis = o.vec3("axis", {0, 0, 1});
        const double big = o.positive("major_radius");
        const double small = o.positive("minor_radius");
        if (!(small < big)) fail(ctx, "minor_radius must be smaller than major_radius");
        if (norm(axis) == 0.0) fail(ctx, "axis must be nonzero");
        resolved = o.finish();
        return AxisymTorus{Frame::from_axis(c, axis), big, small};
    }
    fail(ctx, "unknown domain type \"" + t + "\"");
}

Domain domain_from(const Primitive& p) {
    return std::visit(
        [](const auto& v) -> Domain {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Ball>)
                return Domain::ball(v.center, v.radius);
            else
                return Domain::torus(v);
        },
        p);
}

Domain parse_domain_impl(const json& j, json& resolved) {
    if (j.is_object() && j.value("type", std::string()) == "union") {
        Obj o(j, "domain");
        o.type();
        const json& comps = o.raw("components");
        if (!comps.is_array() || comps.empty()) fail("domain", "\"components\" must be a nonempty array");
        std::vector<Primitive> prims;
        json rc = json::array();
        for (std::size_t k = 0; k < comps.size(); ++k) {
            json r;
            prims.push_back(parse_primitive(comps[k], "domain.components[" + std::to_string(k) + "]", r));
            rc.push_back(r);
        }
        o.put("components", rc);
        resolved = o.finish();
        return guarded("domain", [&] { return Domain::union_of(prims); });
    }
    const Primitive p = parse_primitive(j, "domain", resolved);
    return guarded("domain", [&] { return domain_from(p); });
}

AnalyticField parse_field_impl(const json& j, const std::optional<Domain>& domain, const std::string& ctx,
                               json& resolved) {
    Obj o(j, ctx);
    const std::string t = o.type();
    AnalyticField f;
    if (t == "tube") {
        const Vec3 c = o.vec3("center", {});
        const Vec3 axis = o.vec3("axis", {0, 0, 1});
        const std::optional<Vec3> hint = o.maybe_vec3("x_hint");
        const double rc = o.positive("loop_radius");
        const double eps = o.positive("tube_radius");
        const double flux = o.num("flux", 1.0);
        const double twist = o.num("twist", 0.0);
        if (norm(axis) == 0.0) fail(ctx, "axis must be nonzero");
        f = guarded(ctx, [&] { return make_tube_field(Frame::from_axis(c, axis, hint), rc, eps, flux, twist); });
    } else if (t == "harmonic_torus") {
        AxisymTorus torus;
        if (o.has("torus")) {
            json r;
            const Primitive p = parse_primitive(o.raw("torus"), ctx + ".torus", r);
            if (!std::holds_alternative<AxisymTorus>(p)) fail(ctx, "\"torus\" must describe a torus");
            torus = std::get<AxisymTorus>(p);
            o.put("torus", r);
        } else {
            const int idx = o.integer("torus_index", 0);
            if (!domain) fail(ctx, "harmonic_torus without \"torus\" needs a domain");
            const auto tori = domain->tori();
            if (idx < 0 || static_cast<std::size_t>(idx) >= tori.size())
                fail(ctx, "torus_index out of range for the domain");
            torus = tori[static_cast<std::size_t>(idx)];
        }
        f = make_harmonic_torus_field(torus);
    } else if (t == "spheromak") {
        const Vec3 c = o.vec3("center", {});
        const double r = o.positive("radius");
        const double b0 = o.num("amplitude", 1.0);
        f = make_spheromak(Ball{c, r}, b0).field;
    } else if (t == "gradient") {
        const Vec3 lin = o.vec3("linear", {});
        Mat3 q;
        if (o.has("quadratic")) {
            const json& m = o.raw("quadratic");
            if (!m.is_array() || m.size() != 3) fail(ctx, "\"quadratic\" must be a 3x3 array");
            for (int r = 0; r < 3; ++r) {
                if (!m[r].is_array() || m[r].size() != 3) fail(ctx, "\"quadratic\" must be a 3x3 array");
                for (int c = 0; c < 3; ++c) {
                    if (!m[r][c].is_number()) fail(ctx, "\"quadratic\" entries must be numbers");
                    q(r, c) = m[r][c].get<double>();
                }
            }
            o.put("quadratic", m);
        }
        const double xyz = o.num("xyz", 0.0);
        f = make_gradient_field(lin, q, xyz);
    } else if (t == "constant") {
        f = make_constant_field(o.vec3("value"));
    } else if (t == "combo") {
        const json& terms = o.raw("terms");
        if (!terms.is_array() || terms.empty()) fail(ctx, "\"terms\" must be a nonempty array");
        std::vector<double> coeffs;
        std::vector<AnalyticField> fields;
        json rt = json::array();
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string tc = ctx + ".terms[" + std::to_string(k) + "]";
            Obj term(terms[k], tc);
            coeffs.push_back(term.num("coeff", 1.0));
            json rf;
            fields.push_back(parse_field_impl(term.raw("field"), domain, tc + ".field", rf));
            term.put("field", rf);
            rt.push_back(term.finish());
        }
        o.put("terms", rt);
        f = linear_combination(coeffs, fields);
    } else {
        fail(ctx, "unknown field type \"" + t + "\"");
    }
    resolved = o.finish();
    return f;
}

FlowFamily parse_flow_impl(const json& j, const std::string& ctx, json& resolved) {
    Obj o(j, ctx);
    const std::string t = o.type();
    FlowFamily::Variant v;
    if (t == "rigid_rotation") {
        v = RigidRotation{o.vec3("center", {}), o.vec3("axis", {0, 0, 1}), o.num("rate", 1.0)};
    } else if (t == "uniform_pulsation") {
        v = UniformPulsation{o.vec3("center", {}), o.num("amplitude", 0.3), o.num("frequency", 1.0)};
    } else if (t == "differential_twist") {
        v = DifferentialTwist{o.vec3("center", {}), o.vec3("axis", {0, 0, 1}), o.num("rate", 1.0),
                              o.num("width", 1.0)};
    } else if (t == "radial_compress") {
        v = RadialCompress{o.vec3("center", {}), o.num("amplitude", 0.3), o.num("frequency", 1.0),
                           o.num("width", 1.0)};
    } else if (t == "composite") {
        const json& st = o.raw("stages");
        if (!st.is_array() || st.empty()) fail(ctx, "\"stages\" must be a nonempty array");
        CompositeFlow c;
        json rs = json::array();
        for (std::size_t k = 0; k < st.size(); ++k) {
            json r;
            c.stages.push_back(parse_flow_impl(st[k], ctx + ".stages[" + std::to_string(k) + "]", r));
            rs.push_back(r);
        }
        o.put("stages", rs);
        v = std::move(c);
    } else {
        fail(ctx, "unknown flow type \"" + t + "\"");
    }
    resolved = o.finish();
    return guarded(ctx, [&] { return FlowFamily(std::move(v)); });
}

PolylineCurve parse_curve_impl(const json& j, const std::string& ctx, json& resolved) {
    Obj o(j, ctx);
    const std::string t = o.type();
    PolylineCurve c;
    if (t == "circle") {
        const Vec3 center = o.vec3("center", {});
        const Vec3 normal = o.vec3("normal", {0, 0, 1});
        const std::optional<Vec3> hint = o.maybe_vec3("x_hint");
        const double r = o.positive("radius");
        const int n = o.integer("segments", 256);
        if (n < 3) fail(ctx, "\"segments\" must be at least 3");
        if (norm(normal) == 0.0) fail(ctx, "normal must be nonzero");
        c = circle_curve(center, normal, r, n, hint);
    } else if (t == "polyline") {
        const json& vs = o.raw("vertices");
        if (!vs.is_array()) fail(ctx, "\"vertices\" must be an array");
        for (const auto& v : vs) {
            if (!v.is_array() || v.size() != 3) fail(ctx, "each vertex must be an array of 3 numbers");
            Vec3 p;
            for (int k = 0; k < 3; ++k) {
                if (!v[k].is_number()) fail(ctx, "vertex coordinates must be numbers");
                p[k] = v[k].get<double>();
            }
            c.vertices.push_back(p);
        }
        o.put("vertices", vs);
        c.closed = o.boolean("closed", true);
        guarded(ctx, [&] {
            validate(c);
            return 0;
        });
    } else {
        fail(ctx, "unknown curve type \"" + t + "\"");
    }
    resolved = o.finish();
    return c;
}

}  // namespace

Domain parse_domain(const json& j) {
    json r;
    return parse_domain_impl(j, r);
}

AnalyticField parse_field(const json& j, const std::optional<Domain>& domain) {
    json r;
    return parse_field_impl(j, domain, "field", r);
}

FlowFamily parse_flow(const json& j) {
    json r;
    return parse_flow_impl(j, "flow", r);
}

PolylineCurve parse_curve(const json& j) {
    json r;
    return parse_curve_impl(j, "curve", r);
}

ExperimentConfig parse_config(const json& j, std::optional<double> h_override) {
    if (!j.is_object()) fail("config", "top level must be an object");
    static const std::set<std::string> keys{"domain", "field", "field2", "flow", "grid", "times", "options"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key())) fail("config", "unknown key \"" + it.key() + "\"");

    ExperimentConfig c;
    json& r = c.resolved;
    r = json::object();
    if (j.contains("domain")) {
        json d;
        c.domain = parse_domain_impl(j.at("domain"), d);
        r["domain"] = d;
    }
    if (j.contains("field")) {
        json f;
        c.field = parse_field_impl(j.at("field"), c.domain, "field", f);
        r["field"] = f;
    }
    if (j.contains("field2")) {
        json f;
        c.field2 = parse_field_impl(j.at("field2"), c.domain, "field2", f);
        r["field2"] = f;
    }
    if (j.contains("flow")) {
        json f;
        c.flow = parse_flow_impl(j.at("flow"), "flow", f);
        r["flow"] = f;
    }
    if (j.contains("grid")) {
        Obj g(j.at("grid"), "grid");
        c.grid.h = g.num("h", c.grid.h);
        c.grid.padding = g.integer("padding", c.grid.padding);
        g.finish();
    }
    if (h_override) c.grid.h = *h_override;
    if (!(c.grid.h > 0)) fail("grid", "\"h\" must be positive");
    if (c.grid.padding < 1) fail("grid", "\"padding\" must be at least 1");
    r["grid"] = {{"h", c.grid.h}, {"padding", c.grid.padding}};
    if (j.contains("times")) {
        const json& t = j.at("times");
        if (!t.is_array() || t.empty()) fail("times", "must be a nonempty array of numbers");
        for (const auto& v : t) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) fail("times", "entries must be finite numbers");
            c.times.push_back(v.get<double>());
        }
        r["times"] = c.times;
    }
    if (j.contains("options")) {
        if (!j.at("options").is_object()) fail("options", "expected an object");
        c.options = j.at("options");
    }
    r["options"] = c.options;
    return c;
}

ExperimentConfig load_config(const std::string& path, std::optional<double> h_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file \"" + path + "\" is not valid JSON: " + e.what());
    }
    return parse_config(j, h_override);
}

OptionReader::OptionReader(const json& options, std::string context) : j_(options), ctx_(std::move(context)) {
    if (!j_.is_object()) fail(ctx_, "expected an object");
}

double OptionReader::number(const std::string& key) const {
    if (!j_.contains(key)) fail(ctx_, "missing required key \"" + key + "\"");
    const json& v = j_.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) fail(ctx_, "\"" + key + "\" must be a finite number");
    return v.get<double>();
}

double OptionReader::number(const std::string& key, double fallback) const {
    return j_.contains(key) ? number(key) : fallback;
}

int OptionReader::integer(const std::string& key, int fallback) const {
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(ctx_, "\"" + key + "\" must be an integer");
    return v.get<int>();
}

std::string OptionReader::text(const std::string& key, const std::string& fallback) const {
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(ctx_, "\"" + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<double> OptionReader::numbers(const std::string& key) const {
    if (!j_.contains(key)) fail(ctx_, "missing required key \"" + key + "\"");
    const json& v = j_.at(key);
    if (!v.is_array()) fail(ctx_, "\"" + key + "\" must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number() || !std::isfinite(e.get<double>()))
            fail(ctx_, "\"" + key + "\" entries must be finite numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<double> OptionReader::numbers(const std::string& key, std::vector<double> fallback) const {
    return j_.contains(key) ? numbers(key) : fallback;
}

const json& OptionReader::child(const std::string& key) const {
    if (!j_.contains(key)) fail(ctx_, "missing required key \"" + key + "\"");
    return j_.at(key);
}

void OptionReader::only(std::initializer_list<const char*> allowed) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) fail(ctx_, "unknown key \"" + it.key() + "\"");
    }
}

}  // namespace helicity
