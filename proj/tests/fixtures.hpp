#pragma once

#include "hilb/io.hpp"

#include <string>

namespace fixtures {

inline std::string data(const std::string& rel) { return std::string(HILB_DATA_DIR) + "/" + rel; }

inline const hilb::SurfaceModel& elliptic() {
  static const hilb::SurfaceModel m = hilb::load_model(data("models/elliptic.json"));
  return m;
}

inline const hilb::SurfaceModel& genus2() {
  static const hilb::SurfaceModel m = hilb::load_model(data("models/genus2.json"));
  return m;
}

inline hilb::Json elliptic_json() { return hilb::read_json(data("models/elliptic.json")); }

}  // namespace fixtures

namespace fixtures {

// Hand-built model of an I2 fiber neighbourhood: one graph class c in H^1,
// u = p1 - p2 and s = (p1 + p2)/2 in H^2, iota(u^) = -2u.
inline const hilb::SurfaceModel& i2_by_hand() {
  static const hilb::SurfaceModel m = hilb::model_from_json(hilb::Json::parse(R"({
    "name": "i2",
    "basis": [{"label": "1", "d": 0, "k": 0}, {"label": "c", "d": 1, "k": 1},
              {"label": "u", "d": 2, "k": 1}, {"label": "s", "d": 2, "k": 2}],
    "iota": [{"from_dual_of": 2, "terms": [{"m": 2, "coeff": "-2"}]}]
  })"));
  return m;
}

}  // namespace fixtures
