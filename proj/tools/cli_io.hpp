#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rcov/covers.hpp"
#include "rcov/endoscopy.hpp"
#include "rcov/localfield.hpp"
#include "rcov/transfer.hpp"

namespace rcov::cli {

using json = nlohmann::json;

// Read-only view of a JSON value that knows its JSON-pointer path. Every
// failure throws ValidationError naming that path.
class Node {
public:
  Node(const json& j, std::string ptr) : j_(&j), ptr_(std::move(ptr)) {}

  [[noreturn]] void fail(const std::string& msg) const;
  const json& raw() const { return *j_; }
  const std::string& ptr() const { return ptr_; }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  Node at(const std::string& key) const;
  Node at(std::size_t i) const;
  std::size_t size() const;  // arrays only

  i64 integer() const;
  bool boolean() const;
  std::string str() const;
  Rational rational() const;  // integer or "p/q"
  Vec vec() const;
  Mat mat() const;
  std::vector<Mat> mats() const;

private:
  const json* j_;
  std::string ptr_;
};

json read_json_file(const std::string& path);  // "-" reads stdin

FiniteGroup parse_group(const Node& n);
RootDatum parse_root_datum(const Node& n);
TorsionPoint parse_torsion_point(const Node& n);
EndoscopicDatum parse_datum(const Node& n);
FiniteModule parse_module(const Node& n, const FiniteGroup& G);
CoverBase parse_base(const Node& n);
CoverDescriptor parse_descriptor(const Node& n);
QuadExt parse_field(const Node& n);
QuadExtElement parse_element(const Node& n, const QuadExt& E);
CoverElement parse_cover_element(const Node& n, const QuadExt& E);
Normalization parse_normalization(const std::string& s, const std::string& where);
CftConvention parse_cft(const std::string& s, const std::string& where);
TransferInput parse_transfer_input(const Node& n);

std::string rational_string(const Rational& r);
json to_json(const FiniteGroup& G);
json to_json(const RootDatum& rd);
json to_json(const TorsionPoint& s);
json to_json(const EndoscopicDatum& d);
json to_json(const CoverDescriptor& t);
json to_json(const QuadExt& E);
json to_json(const QuadExtElement& x);
json to_json(const CoverElement& c);
json to_json(const RootOfUnity& r);
json to_json(const TransferInput& in);
std::string to_string(Normalization n);
std::string to_string(CftConvention c);

// Published input schemas, keyed by input kind.
json input_schemas();

}  // namespace rcov::cli
