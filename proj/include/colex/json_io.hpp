#pragma once

#include <string>

#include "json.hpp"

#include "colex/lattice.hpp"

namespace colex {

using json = nlohmann::ordered_json;

// {D, vertices:[{id,color,pos,origin}], top_simplices:[[ids]]}, field order fixed
inline json lattice_to_json(const ColoredComplex& K) {
  json j;
  j["D"] = K.D;
  j["vertices"] = json::array();
  for (const auto& v : K.vertices) {
    json jv;
    jv["id"] = v.id;
    jv["color"] = v.color;
    jv["pos"] = {v.pos[0], v.pos[1], v.pos[2]};
    jv["origin"] = origin_name(v.origin);
    j["vertices"].push_back(std::move(jv));
  }
  j["top_simplices"] = json::array();
  for (const auto& t : K.top_simplices) j["top_simplices"].push_back(t);
  return j;
}

inline ColoredComplex lattice_from_json(const json& j) {
  if (!j.is_object() || !j.contains("D") || !j.contains("vertices") ||
      !j.contains("top_simplices"))
    throw Error("lattice json: missing D/vertices/top_simplices");
  ColoredComplex K;
  if (!j["D"].is_number_integer()) throw Error("lattice json: D must be an integer");
  K.D = j["D"].get<int>();
  if (K.D < 1 || K.D > 3) throw Error("lattice json: D out of supported range");
  if (!j["vertices"].is_array() || !j["top_simplices"].is_array())
    throw Error("lattice json: vertices/top_simplices must be arrays");

  for (const auto& jv : j["vertices"]) {
    Vertex v;
    if (!jv.contains("id") || !jv.contains("color") || !jv.contains("pos") ||
        !jv.contains("origin"))
      throw Error("lattice json: vertex missing a field");
    v.id = jv["id"].get<int>();
    if (v.id != int(K.vertices.size()))
      throw Error("lattice json: vertex ids must be 0..N-1 in order");
    v.color = jv["color"].get<int>();
    if (v.color < 0 || v.color > K.D)
      throw Error("lattice json: vertex color out of range");
    auto pos = jv["pos"];
    if (!pos.is_array() || pos.size() != 3)
      throw Error("lattice json: vertex pos must have three entries");
    for (int k = 0; k < 3; ++k) v.pos[std::size_t(k)] = pos[std::size_t(k)].get<int>();
    v.origin = origin_from_name(jv["origin"].get<std::string>());
    K.vertices.push_back(v);
  }

  for (const auto& jt : j["top_simplices"]) {
    if (!jt.is_array() || jt.size() != std::size_t(K.D) + 1)
      throw Error("lattice json: top simplex with wrong vertex count");
    Simplex s;
    for (const auto& jv : jt) {
      int id = jv.get<int>();
      if (id < 0 || id >= int(K.vertices.size()))
        throw Error("lattice json: top simplex references unknown vertex");
      s.push_back(id);
    }
    if (!std::is_sorted(s.begin(), s.end()) ||
        std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error("lattice json: top simplex ids must be strictly increasing");
    K.top_simplices.push_back(std::move(s));
  }
  K.top_parity.assign(K.top_simplices.size(), -1);
  if (!std::is_sorted(K.top_simplices.begin(), K.top_simplices.end()))
    throw Error("lattice json: top simplices must be listed in lex order");
  K.build_index();

  // closed iff every facet has exactly two cofaces
  bool closed = true;
  for (const auto& [facet, cofaces] : K.faces[std::size_t(K.D - 1)]) {
    if (cofaces.size() > 2)
      throw Error("lattice json: facet with more than two cofaces");
    if (cofaces.size() != 2) closed = false;
  }
  K.is_closed = closed;

  auto rep = validate_complex(K);
  if (!rep.ok) throw Error("lattice json: " + rep.failures.front());
  return K;
}

}  // namespace colex
