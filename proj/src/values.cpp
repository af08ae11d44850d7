#include "minicog/values.hpp"

#include <algorithm>

#include <json.hpp>

namespace minicog {

namespace {

struct VPrinter {
  std::string operator()(const VUnit&) const { return "()"; }
  std::string operator()(const VBool& b) const { return b.v ? "True" : "False"; }
  std::string operator()(const VU8& x) const { return std::to_string(x.v); }
  std::string operator()(const VU32& x) const { return std::to_string(x.v); }
  std::string operator()(const VProd& p) const {
    std::string out = "(";
    for (size_t i = 0; i < p.items.size(); ++i) {
      if (i) out += ", ";
      out += to_string(p.items[i]);
    }
    return out + ")";
  }
  std::string operator()(const VFun& f) const {
    std::string out = "<fun " + f.name;
    for (const Type& t : f.tyargs) out += " " + to_string(t);
    return out + ">";
  }
  std::string operator()(const VAbs& a) const {
    std::string out = "[";
    for (size_t i = 0; i < a.wa.xs.size(); ++i) {
      if (i) out += ", ";
      out += to_string(a.wa.xs[i]);
    }
    return out + "]";
  }
};

struct UPrinter {
  std::string operator()(const UUnit&) const { return "()"; }
  std::string operator()(const UBool& b) const { return b.v ? "True" : "False"; }
  std::string operator()(const UU8& x) const { return std::to_string(x.v); }
  std::string operator()(const UU32& x) const { return std::to_string(x.v); }
  std::string operator()(const UProd& p) const {
    std::string out = "(";
    for (size_t i = 0; i < p.items.size(); ++i) {
      if (i) out += ", ";
      out += to_string(p.items[i]);
    }
    return out + ")";
  }
  std::string operator()(const UFun& f) const {
    std::string out = "<fun " + f.name;
    for (const Type& t : f.tyargs) out += " " + to_string(t);
    return out + ">";
  }
  std::string operator()(const ULoc& l) const { return "ptr" + std::to_string(l.loc); }
  std::string operator()(const UAbs& a) const {
    return "UWA " + to_string(a.wa.elem) + " " + std::to_string(a.wa.len) + " ptr" +
           std::to_string(a.wa.base);
  }
};

nlohmann::json uvalue_json(const UValue& u) {
  using nlohmann::json;
  struct J {
    json operator()(const UUnit&) const { return {{"t", "unit"}}; }
    json operator()(const UBool& b) const { return {{"t", "bool"}, {"v", b.v}}; }
    json operator()(const UU8& x) const { return {{"t", "u8"}, {"v", x.v}}; }
    json operator()(const UU32& x) const { return {{"t", "u32"}, {"v", x.v}}; }
    json operator()(const UProd& p) const {
      json items = json::array();
      for (const UValue& x : p.items) items.push_back(uvalue_json(x));
      return {{"t", "prod"}, {"items", items}};
    }
    json operator()(const UFun& f) const {
      json tys = json::array();
      for (const Type& t : f.tyargs) tys.push_back(to_string(t));
      return {{"t", "fun"}, {"name", f.name}, {"tyargs", tys}};
    }
    json operator()(const ULoc& l) const { return {{"t", "loc"}, {"v", l.loc}}; }
    json operator()(const UAbs& a) const {
      return {{"t", "wa"},
              {"elem", to_string(a.wa.elem)},
              {"len", a.wa.len},
              {"base", a.wa.base}};
    }
  };
  return std::visit(J{}, u.v);
}

}  // namespace

std::string to_string(const VValue& v) { return std::visit(VPrinter{}, v.v); }
std::string to_string(const UValue& v) { return std::visit(UPrinter{}, v.v); }

std::string store_to_json(const Store& s) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [loc, val] : s.cells)  // std::map iterates in id order
    cells.push_back(nlohmann::json::array({loc, uvalue_json(val)}));
  nlohmann::json doc = {{"cells", cells}, {"next", s.next}};
  return doc.dump();
}

bool Footprint::disjoint() const {
  return std::none_of(w.begin(), w.end(), [&](Loc l) { return r.count(l) != 0; });
}

Footprint Footprint::unite(const Footprint& other) const {
  Footprint out = *this;
  out.r.insert(other.r.begin(), other.r.end());
  out.w.insert(other.w.begin(), other.w.end());
  return out;
}

std::set<Loc> Footprint::all() const {
  std::set<Loc> out = r;
  out.insert(w.begin(), w.end());
  return out;
}

bool subset(const std::set<Loc>& a, const std::set<Loc>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace minicog
