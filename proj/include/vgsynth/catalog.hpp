// Copyright 2026 The vgsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Object classes available to the scene generator, with nominal sizes in
// meters and randomized size variation.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "vgsynth/error.hpp"
#include "vgsynth/geometry.hpp"
#include "vgsynth/random.hpp"

namespace vgsynth {

inline constexpr double kDefaultJitter = 0.15;

struct ObjectClass {
  std::string name;
  Dims3 nominal_dims;

  friend bool operator==(const ObjectClass&, const ObjectClass&) = default;
};

class Catalog {
 public:
  Catalog() = default;

  // Throws SchemaError on duplicate names, empty names or invalid dims.
  explicit Catalog(std::vector<ObjectClass> classes)
      : classes_(std::move(classes)) {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      const auto& c = classes_[i];
      if (c.name.empty()) {
        throw Error(ErrorCode::kSchemaError, "class name must be non-empty");
      }
      if (!is_valid(c.nominal_dims)) {
        throw Error(ErrorCode::kSchemaError,
                    "class '" + c.name + "' has invalid dimensions");
      }
      if (!index_.emplace(c.name, i).second) {
        throw Error(ErrorCode::kSchemaError,
                    "duplicate class name '" + c.name + "'");
      }
    }
  }

  const std::vector<ObjectClass>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  bool contains(std::string_view name) const {
    return index_.find(std::string(name)) != index_.end();
  }

  const ObjectClass& at(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
      throw Error(ErrorCode::kUnknownClass, std::string(name));
    }
    return classes_[it->second];
  }

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.classes_ == b.classes_;
  }

 private:
  std::vector<ObjectClass> classes_;
  std::unordered_map<std::string, std::size_t> index_;
};

// The 39 indoor classes with common real-world sizes, (width, length, height).
inline const Catalog& builtin_catalog() {
  static const Catalog catalog({
      {"Window", {0.2, 1.3, 1.2}},
      {"Cabinet", {1.0, 0.5, 2.0}},
      {"Bed", {2.0, 2.2, 1.0}},
      {"Chair", {0.6, 0.6, 1.0}},
      {"Sofa", {2.0, 1.0, 1.0}},
      {"Table", {1.5, 1.0, 0.75}},
      {"Door", {0.9, 0.1, 2.0}},
      {"Bookshelf", {1.0, 0.3, 2.0}},
      {"Picture", {0.8, 0.05, 0.6}},
      {"Counter", {1.5, 0.6, 0.9}},
      {"Desk", {1.4, 0.8, 0.75}},
      {"Curtain", {2.0, 0.1, 2.0}},
      {"Refrigerator", {0.8, 0.8, 1.8}},
      {"TV", {1.0, 0.1, 0.6}},
      {"Trash Can", {0.4, 0.4, 0.7}},
      {"Microwave", {0.6, 0.5, 0.4}},
      {"Oven", {0.7, 0.6, 0.9}},
      {"Toaster", {0.3, 0.2, 0.3}},
      {"Mirror", {1.0, 0.05, 1.5}},
      {"Clock", {0.15, 0.1, 0.1}},
      {"Mug", {0.08, 0.1, 0.08}},
      {"Smartphone", {0.08, 0.15, 0.01}},
      {"Wallet", {0.12, 0.08, 0.02}},
      {"Remote", {0.05, 0.18, 0.02}},
      {"Mouse", {0.07, 0.04, 0.12}},
      {"Keyboard", {0.18, 0.05, 0.1}},
      {"Book", {0.15, 0.02, 0.22}},
      {"Pen", {0.015, 0.015, 0.14}},
      {"Light Bulb", {0.06, 0.1, 0.06}},
      {"Headphones", {0.18, 0.15, 0.1}},
      {"Glasses", {0.14, 0.05, 0.02}},
      {"Candle", {0.07, 0.15, 0.07}},
      {"Soap Bar", {0.1, 0.02, 0.06}},
      {"Spoon", {0.04, 0.02, 0.16}},
      {"Fork", {0.03, 0.02, 0.18}},
      {"USB", {0.07, 0.02, 0.02}},
      {"Dice", {0.02, 0.02, 0.02}},
      {"Key", {0.05, 0.02, 0.12}},
      {"Coin", {0.03, 0.003, 0.03}},
  });
  return catalog;
}

inline Dims3 nominal_dims(const Catalog& catalog, std::string_view class_name) {
  return catalog.at(class_name).nominal_dims;
}

// Scales each axis independently by a factor drawn from
// U[1 - jitter, 1 + jitter].
inline Dims3 sample_dims(const Catalog& catalog, std::string_view class_name,
                         double jitter, RandomEngine& rng) {
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw Error(ErrorCode::kInvalidJitter,
                "jitter must lie in [0, 1), got " + std::to_string(jitter));
  }
  const Dims3 base = nominal_dims(catalog, class_name);
  if (jitter == 0.0) return base;
  auto scale = [&] { return uniform_real(rng, 1.0 - jitter, 1.0 + jitter); };
  const double sw = scale();
  const double sl = scale();
  const double sh = scale();
  return {base.width * sw, base.length * sl, base.height * sh};
}

// Catalog file: JSON Lines, one {"name", "width", "length", "height"} object
// per class. Unknown keys are rejected.
inline std::string catalog_to_jsonl(const Catalog& catalog) {
  std::string out;
  for (const auto& c : catalog.classes()) {
    nlohmann::ordered_json rec;
    rec["name"] = c.name;
    rec["width"] = c.nominal_dims.width;
    rec["length"] = c.nominal_dims.length;
    rec["height"] = c.nominal_dims.height;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

inline Catalog catalog_from_jsonl(std::istream& in) {
  std::vector<ObjectClass> classes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedLineError(line_no, e.what());
    }
    if (!rec.is_object() || rec.size() != 4) {
      throw MalformedLineError(
          line_no, "expected exactly the keys name, width, length, height");
    }
    auto number = [&](const char* key) {
      auto it = rec.find(key);
      if (it == rec.end() || !it->is_number()) {
        throw MalformedLineError(line_no,
                                 std::string("missing numeric '") + key + "'");
      }
      return it->get<double>();
    };
    auto name_it = rec.find("name");
    if (name_it == rec.end() || !name_it->is_string()) {
      throw MalformedLineError(line_no, "missing string 'name'");
    }
    classes.push_back(
        {name_it->get<std::string>(),
         {number("width"), number("length"), number("height")}});
  }
  return Catalog(std::move(classes));
}

inline Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open catalog " + path);
  return catalog_from_jsonl(in);
}

}  // namespace vgsynth
