#include "spaceform/specfile.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace spaceform {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw SpecParseError("unknown key \"" + key + "\" in " + where);
    }
}

Rational parse_rational(const json& v, const std::string& where) {
    if (v.is_string()) return rational_from_string(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
    if (v.is_number_float()) return rational_from_double_exact(v.get<double>());
    throw SpecParseError("expected a rational (\"p/q\" string or number) in " + where);
}

NumVec3 parse_vec3(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3)
        throw SpecParseError("expected a 3-vector in " + where);
    Vec3r r;
    for (int i = 0; i < 3; ++i) r[i] = parse_rational(v[static_cast<std::size_t>(i)], where);
    return NumVec3::of(r);
}

Angle parse_angle(const json& v, const std::string& where) {
    if (!v.is_object()) throw SpecParseError("expected an angle object in " + where);
    check_keys(v, {"rational", "radians"}, where);
    if (v.contains("rational")) {
        if (v.contains("radians"))
            throw SpecParseError("angle has both rational and radians in " + where);
        const auto& arr = v["rational"];
        if (!arr.is_array() || arr.size() != 2)
            throw SpecParseError("angle.rational must be [p, q] in " + where);
        return Angle::turns(arr[0].get<long>(), arr[1].get<long>());
    }
    if (v.contains("radians")) return Angle::radians(v["radians"].get<double>());
    throw SpecParseError("angle needs rational or radians in " + where);
}

EuclIsometry parse_euclidean_generator(const json& g, const std::string& where) {
    if (!g.is_object()) throw SpecParseError("generator must be an object in " + where);
    if (!g.contains("kind")) throw SpecParseError("Euclidean generator needs a kind in " + where);
    std::string kind = g["kind"].get<std::string>();
    if (kind == "translation") {
        check_keys(g, {"kind", "vector"}, where);
        if (!g.contains("vector")) throw SpecParseError("translation needs a vector in " + where);
        return translation3(parse_vec3(g["vector"], where));
    }
    if (kind == "rotation") {
        check_keys(g, {"kind", "axis", "angle", "vector"}, where);
        if (!g.contains("axis") || !g.contains("angle"))
            throw SpecParseError("rotation needs axis and angle in " + where);
        NumVec3 axis = parse_vec3(g["axis"], where);
        Angle angle = parse_angle(g["angle"], where);
        if (!g.contains("vector")) return rotation3(axis, angle);
        // Rotation followed by a translation (not necessarily along the axis).
        NumVec3 shift = parse_vec3(g["vector"], where);
        EuclIsometry m = compose(translation3(shift), rotation3(axis, angle));
        m.recipe = MotionRecipe<3>{MotionKind::Rotation, axis, shift, angle, Rational(0)};
        return m;
    }
    if (kind == "screw") {
        check_keys(g, {"kind", "axis", "angle", "pitch"}, where);
        if (!g.contains("axis") || !g.contains("angle") || !g.contains("pitch"))
            throw SpecParseError("screw needs axis, angle and pitch in " + where);
        return screw3(parse_vec3(g["axis"], where), parse_angle(g["angle"], where),
                      parse_rational(g["pitch"], where));
    }
    if (kind == "glide") {
        check_keys(g, {"kind", "axis", "vector"}, where);
        if (!g.contains("axis") || !g.contains("vector"))
            throw SpecParseError("glide needs axis (mirror normal) and vector in " + where);
        return glide3(parse_vec3(g["axis"], where), parse_vec3(g["vector"], where));
    }
    throw SpecParseError("unknown generator kind \"" + kind + "\" in " + where);
}

SO4Element parse_spherical_generator(const json& g, const std::string& where) {
    if (!g.is_object()) throw SpecParseError("generator must be an object in " + where);
    check_keys(g, {"q1", "q2"}, where);
    if (!g.contains("q1") || !g.contains("q2"))
        throw SpecParseError("spherical generator needs q1 and q2 in " + where);
    auto quat = [&](const json& v) {
        if (!v.is_array() || v.size() != 4)
            throw SpecParseError("quaternion must be [w,x,y,z] in " + where);
        Quaternion q{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                     v[3].get<double>()};
        if (!unit_within(q, 1e-6))
            throw SpecParseError("non-unit quaternion (|q|-1 exceeds 1e-6) in " + where);
        return q;
    };
    return SO4Element(quat(g["q1"]), quat(g["q2"]));
}

json rational_json(const Rational& r) { return json(rational_to_string(r)); }

ordered_json vec_json(const NumVec3& v) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < 3; ++i) {
        if (v.is_exact())
            arr.push_back(rational_to_string((*v.exact)[i]));
        else
            arr.push_back(v.approx[i]);
    }
    return arr;
}

ordered_json angle_json(const Angle& a) {
    ordered_json o;
    if (a.is_rational())
        o["rational"] = ordered_json::array({a.turns_num(), a.turns_den()});
    else
        o["radians"] = a.value();
    return o;
}

}  // namespace

GroupSpec parse_group_spec(const nlohmann::json& doc) {
    if (!doc.is_object()) throw SpecParseError("top level must be an object");
    check_keys(doc, {"ambient", "generators", "identity", "label"}, "top level");
    if (!doc.contains("ambient")) throw SpecParseError("missing ambient");
    std::string ambient = doc["ambient"].get<std::string>();

    GroupSpec spec;
    if (ambient == "euclidean3")
        spec.ambient = GroupSpec::Ambient::Euclidean3;
    else if (ambient == "sphere3")
        spec.ambient = GroupSpec::Ambient::Sphere3;
    else
        throw SpecParseError("ambient must be \"euclidean3\" or \"sphere3\"");

    if (doc.contains("identity")) spec.identity_only = doc["identity"].get<bool>();
    if (doc.contains("label")) spec.label = doc["label"].get<std::string>();

    if (!doc.contains("generators") || !doc["generators"].is_array())
        throw SpecParseError("missing generators array");
    std::size_t idx = 0;
    for (const auto& g : doc["generators"]) {
        std::string where = "generator " + std::to_string(idx + 1);
        if (spec.ambient == GroupSpec::Ambient::Euclidean3)
            spec.euclidean_generators.push_back(parse_euclidean_generator(g, where));
        else
            spec.spherical_generators.push_back(parse_spherical_generator(g, where));
        ++idx;
    }
    if (idx == 0 && !spec.identity_only)
        throw SpecParseError("empty generator list without the identity flag");
    spec.validate();
    return spec;
}

GroupSpec load_group_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecParseError("cannot open spec file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SpecParseError(std::string("JSON parse error in ") + path + ": " + e.what());
    }
    return parse_group_spec(doc);
}

ordered_json serialize_group_spec(const GroupSpec& spec) {
    ordered_json doc;
    doc["ambient"] = spec.ambient == GroupSpec::Ambient::Euclidean3 ? "euclidean3" : "sphere3";
    if (spec.identity_only) doc["identity"] = true;
    if (!spec.label.empty()) doc["label"] = spec.label;
    ordered_json gens = ordered_json::array();
    for (const auto& g : spec.euclidean_generators) {
        if (!g.recipe)
            throw std::invalid_argument("generator without a construction recipe cannot be written");
        const auto& r = *g.recipe;
        ordered_json o;
        switch (r.kind) {
            case MotionKind::Translation:
                o["kind"] = "translation";
                o["vector"] = vec_json(r.shift);
                break;
            case MotionKind::Rotation:
                o["kind"] = "rotation";
                o["axis"] = vec_json(r.axis);
                o["angle"] = angle_json(r.angle);
                if (norm(r.shift.approx) > 0) o["vector"] = vec_json(r.shift);
                break;
            case MotionKind::Screw:
                o["kind"] = "screw";
                o["axis"] = vec_json(r.axis);
                o["angle"] = angle_json(r.angle);
                o["pitch"] = rational_json(r.pitch);
                break;
            case MotionKind::Glide:
                o["kind"] = "glide";
                o["axis"] = vec_json(r.axis);
                o["vector"] = vec_json(r.shift);
                break;
            case MotionKind::Reflection:
                throw std::invalid_argument("pure reflections are not part of the file format");
        }
        gens.push_back(std::move(o));
    }
    for (const auto& g : spec.spherical_generators) {
        ordered_json o;
        o["q1"] = ordered_json::array({g.q1.w, g.q1.x, g.q1.y, g.q1.z});
        o["q2"] = ordered_json::array({g.q2.w, g.q2.x, g.q2.y, g.q2.z});
        gens.push_back(std::move(o));
    }
    doc["generators"] = std::move(gens);
    return doc;
}

}  // namespace spaceform
