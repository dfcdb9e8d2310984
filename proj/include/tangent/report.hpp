#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

namespace tangent {

using json = nlohmann::json;

/// One checked diagram (or property) at one object.
struct CheckItem {
  std::string id;
  std::string object;
  bool pass = true;
  json counterexample;  // null unless the check failed with a witness
  json detail;          // optional counts and notes

  json to_json() const {
    json j{{"diagram_id", id}, {"object", object}, {"pass", pass}};
    if (!counterexample.is_null()) j["counterexample"] = counterexample;
    if (!detail.is_null()) j["detail"] = detail;
    return j;
  }
};

/// A list of check items plus the window they were evaluated over.
struct Report {
  std::string check;
  json truncation = json::object();
  std::vector<CheckItem> items;
  std::vector<std::string> notes;

  bool pass() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
  }

  void add(CheckItem item) { items.push_back(std::move(item)); }

  void append(const Report& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }

  const CheckItem* find(const std::string& id, const std::string& object = {}) const {
    for (const auto& c : items) {
      if (c.id == id && (object.empty() || c.object == object)) return &c;
    }
    return nullptr;
  }

  std::vector<const CheckItem*> failures() const {
    std::vector<const CheckItem*> out;
    for (const auto& c : items) {
      if (!c.pass) out.push_back(&c);
    }
    return out;
  }

  /// Canonical order, so that reports built by any number of workers
  /// serialize identically.
  void sort() {
    std::stable_sort(items.begin(), items.end(), [](const CheckItem& a, const CheckItem& b) {
      return std::tie(a.id, a.object) < std::tie(b.id, b.object);
    });
  }

  json to_json() const {
    json data = json::array();
    for (const auto& c : items) data.push_back(c.to_json());
    json j{{"check", check}, {"truncation", truncation}, {"pass", pass()}, {"data", data}};
    if (!notes.empty()) j["notes"] = notes;
    return j;
  }
};

}  // namespace tangent
