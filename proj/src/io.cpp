#include "escape/io.hpp"

#include <fstream>

namespace escape {

namespace {

Coord coord_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ParseError(std::string("missing or non-integer field \"") + key + "\"");
    return j[key].get<Coord>();
}

Boundary boundary_from_json(const Json& j) {
    if (!j.contains("boundary") || !j["boundary"].is_object())
        throw ParseError("missing \"boundary\" object");
    Boundary b{coord_field(j["boundary"], "width"), coord_field(j["boundary"], "height")};
    b.validate();
    return b;
}

}  // namespace

Json instance_to_json(const Instance& inst) {
    Json j;
    if (std::holds_alternative<RepInstance>(inst)) {
        const RepInstance& rep = std::get<RepInstance>(inst);
        j["type"] = "rep";
        j["boundary"] = {{"width", rep.boundary.width}, {"height", rep.boundary.height}};
        Json rects = Json::array();
        for (const Rect& r : rep.rects)
            rects.push_back({{"x1", r.x1}, {"y1", r.y1}, {"x2", r.x2}, {"y2", r.y2}});
        j["rectangles"] = std::move(rects);
        j["disjoint"] = rep.disjoint;
    } else {
        const SepInstance& sep = std::get<SepInstance>(inst);
        j["type"] = "sep";
        j["boundary"] = {{"width", sep.boundary.width}, {"height", sep.boundary.height}};
        Json pts = Json::array();
        for (const Point& p : sep.points)
            pts.push_back({p.x, p.y});
        j["points"] = std::move(pts);
    }
    return j;
}

Instance instance_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ParseError("instance must be an object with a \"type\" string");
    const std::string type = j["type"].get<std::string>();
    if (type == "rep") {
        RepInstance rep;
        rep.boundary = boundary_from_json(j);
        if (!j.contains("rectangles") || !j["rectangles"].is_array())
            throw ParseError("rep instance needs a \"rectangles\" array");
        for (const Json& rj : j["rectangles"]) {
            if (!rj.is_object())
                throw ParseError("rectangle entries must be objects");
            rep.rects.push_back({coord_field(rj, "x1"), coord_field(rj, "y1"),
                                 coord_field(rj, "x2"), coord_field(rj, "y2")});
        }
        if (j.contains("disjoint")) {
            if (!j["disjoint"].is_boolean())
                throw ParseError("\"disjoint\" must be a boolean");
            rep.disjoint = j["disjoint"].get<bool>();
        }
        rep.validate();
        return rep;
    }
    if (type == "sep") {
        SepInstance sep;
        sep.boundary = boundary_from_json(j);
        if (!j.contains("points") || !j["points"].is_array())
            throw ParseError("sep instance needs a \"points\" array");
        for (const Json& pj : j["points"]) {
            if (!pj.is_array() || pj.size() != 2 || !pj[0].is_number_integer() ||
                !pj[1].is_number_integer())
                throw ParseError("point entries must be [x, y] integer pairs");
            sep.points.push_back({pj[0].get<Coord>(), pj[1].get<Coord>()});
        }
        sep.validate();
        return sep;
    }
    throw ParseError("unknown instance type \"" + type + "\"");
}

Json solution_to_json(const Solution& sol) {
    Json j;
    Json dirs = Json::array();
    for (Direction d : sol.directions)
        dirs.push_back(std::string(to_string(d)));
    j["directions"] = std::move(dirs);
    j["density"] = sol.density;
    j["boundary_density"] = sol.boundary_density;
    return j;
}

Solution solution_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("directions") || !j["directions"].is_array())
        throw ParseError("solution must be an object with a \"directions\" array");
    Solution sol;
    for (const Json& dj : j["directions"]) {
        if (!dj.is_string())
            throw ParseError("directions must be strings");
        sol.directions.push_back(direction_from_string(dj.get<std::string>()));
    }
    if (j.contains("density"))
        sol.density = j["density"].get<std::int64_t>();
    if (j.contains("boundary_density"))
        sol.boundary_density = j["boundary_density"].get<std::int64_t>();
    return sol;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw ParseError("invalid JSON in " + path);
    return j;
}

void save_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

Instance load_instance(const std::string& path) {
    return instance_from_json(load_json(path));
}

void save_instance(const Instance& inst, const std::string& path) {
    save_json(instance_to_json(inst), path);
}

Solution load_solution(const std::string& path) {
    return solution_from_json(load_json(path));
}

void save_solution(const Solution& sol, const std::string& path) {
    save_json(solution_to_json(sol), path);
}

}  // namespace escape
