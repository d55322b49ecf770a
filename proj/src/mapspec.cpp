#include "ballop/mapspec.hpp"

#include <fstream>
#include <stdexcept>

namespace ballop {

namespace {

Cplx parse_cplx(const Json& j) {
    if (j.is_number()) return Cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return Cplx(j[0].get<double>(), j[1].get<double>());
    throw std::invalid_argument("expected a number or an [re, im] pair");
}

CVec parse_cvec(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array of complex entries");
    CVec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = parse_cplx(j[i]);
    return v;
}

CMat parse_cmat(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a matrix");
    const int rows = static_cast<int>(j.size());
    CMat m(rows, rows);
    for (int i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != rows)
            throw std::invalid_argument("matrix must be square");
        for (int k = 0; k < rows; ++k) m(i, k) = parse_cplx(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

}  // namespace

LinearFractionalMap parse_map_spec(const Json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("map spec must be a JSON object");
    if (spec.contains("kind")) {
        std::string kind = spec.at("kind").get<std::string>();
        if (kind == "automorphism") return ball_automorphism(parse_cvec(spec.at("a")));
        if (kind == "unitary") return unitary_map(parse_cmat(spec.at("U")));
        if (kind == "disk")
            return disk_map(parse_cplx(spec.at("a")), parse_cplx(spec.at("b")),
                            parse_cplx(spec.at("c")), parse_cplx(spec.at("d")));
        if (kind == "identity") return LinearFractionalMap::identity(spec.at("N").get<int>());
        throw std::invalid_argument("unknown map kind: " + kind);
    }
    int n = spec.at("N").get<int>();
    CMat a = parse_cmat(spec.at("A"));
    if (a.rows() != n) throw std::invalid_argument("A must be N x N");
    CVec b = parse_cvec(spec.at("B"));
    CVec c = parse_cvec(spec.at("C"));
    if (b.size() != n || c.size() != n) throw std::invalid_argument("B, C must have length N");
    return LinearFractionalMap(a, b, c, parse_cplx(spec.at("d")));
}

LinearFractionalMap load_map_spec(const std::string& inline_or_path) {
    std::size_t first = inline_or_path.find_first_not_of(" \t\n\r");
    if (first != std::string::npos && inline_or_path[first] == '{')
        return parse_map_spec(Json::parse(inline_or_path));
    std::ifstream in(inline_or_path);
    if (!in) throw std::invalid_argument("cannot open map spec file: " + inline_or_path);
    Json j;
    in >> j;
    return parse_map_spec(j);
}

Json cplx_to_json(Cplx z) { return Json::array({z.real(), z.imag()}); }

Json map_to_json(const LinearFractionalMap& map) {
    Json j;
    j["N"] = map.dim();
    Json a = Json::array();
    for (int i = 0; i < map.dim(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < map.dim(); ++k) row.push_back(cplx_to_json(map.a()(i, k)));
        a.push_back(row);
    }
    j["A"] = a;
    Json b = Json::array(), c = Json::array();
    for (int i = 0; i < map.dim(); ++i) {
        b.push_back(cplx_to_json(map.b()(i)));
        c.push_back(cplx_to_json(map.c()(i)));
    }
    j["B"] = b;
    j["C"] = c;
    j["d"] = cplx_to_json(map.d());
    return j;
}

SpaceSpec parse_space(const std::string& kind, int dim, double s) {
    if (kind == "hardy") return SpaceSpec::hardy(dim);
    if (kind == "bergman") return SpaceSpec::bergman(dim, s);
    if (kind == "dirichlet") return SpaceSpec::dirichlet(dim);
    throw std::invalid_argument("unknown space: " + kind);
}

}  // namespace ballop
