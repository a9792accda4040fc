#pragma once

// JSON forms of SystemSpec and EffectiveCoupling (nlohmann/json).

#include <cmath>
#include <string>

#include "json.hpp"
#include "spinbus/effective.hpp"
#include "spinbus/model.hpp"

namespace spinbus {

using json = nlohmann::json;

inline Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "ring") return Boundary::ring;
  throw InvalidArgument("boundary must be \"open\" or \"ring\", got \"" + s + "\"");
}

inline void to_json(json& j, const Attachment& a) { j = json{{"label", a.label}, {"site", a.site}, {"j_bare", a.j_bare}}; }

inline void from_json(const json& j, Attachment& a) {
  a.label = j.at("label").get<std::string>();
  a.site = j.at("site").get<int>();
  a.j_bare = j.value("j_bare", 0.01);
}

inline void to_json(json& j, const SystemSpec& s) {
  j = json{{"n_chain", s.n_chain}, {"boundary", to_string(s.boundary)}, {"j_chain", s.j_chain}, {"attachments", s.attachments}};
}

inline void from_json(const json& j, SystemSpec& s) {
  s.n_chain = j.at("n_chain").get<int>();
  s.boundary = boundary_from_string(j.value("boundary", std::string("open")));
  s.j_chain = j.value("j_chain", std::vector<double>{});
  s.attachments = j.value("attachments", std::vector<Attachment>{});
  s.validate();
}

inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// One row of the couplings output.
inline json coupling_row(const EffectiveCoupling& c) {
  return json{{"method", to_string(c.method)},
              {"N", c.n_chain},
              {"boundary", to_string(c.boundary)},
              {"i", c.site_i},
              {"j", c.site_j},
              {"jA", c.j_a},
              {"jB", c.j_b},
              {"value", finite_or_null(c.value)},
              {"gap", finite_or_null(c.gap)},
              {"ground_character", to_string(c.character)},
              {"flagged", c.flagged},
              {"flag", c.flag}};
}

}  // namespace spinbus
