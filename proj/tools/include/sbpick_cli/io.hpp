#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "sbpick/modelbuild.hpp"
#include "sbpick/pick.hpp"
#include "sbpick/realize.hpp"
#include "sbpick/spectral.hpp"

namespace sbpick::cli {

using Json = nlohmann::json;

// Raised for unreadable files, malformed JSON and documents of the wrong shape.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an output file cannot be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Complex numbers are [re, im]; matrices are row-major nested arrays.
Json to_json(Complex z);
Json to_json(const CVector& v);
Json to_json(const CMatrix& m);
Json to_json(const GPoint& s);  // [s1_re, s1_im, s2_re, s2_im]

Complex complex_from_json(const Json& j);
CVector vector_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j);
GPoint gpoint_from_json(const Json& j);

Json problem_to_json(const PickProblem& p);
PickProblem problem_from_json(const Json& j);

Json colligation_to_json(const Colligation& c);
Colligation colligation_from_json(const Json& j);

Json certificate_to_json(const PickCertificate& c);
PickCertificate certificate_from_json(const Json& j);

Json gmodel_to_json(const GModel& g);
GModel gmodel_from_json(const Json& j);

// {"s1": matrix, "s2": matrix}
CommutingPair pair_from_json(const Json& j);

// Points for evaluation: either {"points": [...]} or a problem document.
std::vector<GPoint> points_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);

// Serialized form used for every JSON artifact: sorted keys, two-space indent,
// shortest round-trip doubles, trailing newline.
std::string dump(const Json& j);

// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// Shortest round-trip decimal form of x; "nan" and "inf" for non-finite values.
std::string format_double(double x);

}  // namespace sbpick::cli
