#include "planefield/errors.hpp"

#include <sstream>

namespace planefield {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string format_point(const Point& p) {
  return "(" + num(p[0]) + ", " + num(p[1]) + ", " + num(p[2]) + ")";
}

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected,
                         const std::string& found)
    : Error("SyntaxError", "syntax error at position " + std::to_string(position) +
                               ": expected " + join(expected) + ", found " + found),
      position_(position),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::string name, std::size_t position)
    : Error("UnknownIdentifier",
            "unknown identifier '" + name + "' at position " + std::to_string(position)),
      name_(std::move(name)),
      position_(position) {}

ArityError::ArityError(const std::string& function, std::size_t expected, std::size_t got,
                       std::size_t position)
    : Error("ArityError", "function '" + function + "' at position " +
                              std::to_string(position) + " takes " +
                              std::to_string(expected) + " argument(s), got " +
                              std::to_string(got)) {}

DomainError::DomainError(std::string function, double argument)
    : Error("DomainError", function + ": argument " + num(argument) + " outside domain"),
      function_(std::move(function)),
      argument_(argument) {}

DomainError::DomainError(std::string function, const std::string& detail)
    : Error("DomainError", function + ": " + detail), function_(std::move(function)) {}

NotSPD::NotSPD(const Point& p, int failing_minor)
    : Error("NotSPD", "metric not positive definite at " + format_point(p) +
                          " (leading minor " + std::to_string(failing_minor) + ")"),
      point_(p),
      minor_(failing_minor) {}

DegenerateDistribution::DegenerateDistribution(const Point& p, const std::string& why)
    : Error("DegenerateDistribution", "degenerate distribution at " + format_point(p) + ": " + why) {}

SingularSample::SingularSample(const Point& p, const std::string& coordinate)
    : Error("SingularSample",
            "sample " + format_point(p) + " lies on the singular locus of " + coordinate) {}

NotTransverse::NotTransverse(const Point& p, double angle)
    : Error("NotTransverse", "normal is not transverse to the target distribution at " +
                                 format_point(p) + " (angle " + num(angle) + ")"),
      point_(p),
      angle_(angle) {}

NonSPDPath::NonSPDPath(double t, double u, double v, int depth)
    : Error("NonSPDPath", "metric path leaves the SPD cone at t=" + num(t) + ", p=(" + num(u) +
                              ", " + num(v) + ") after subdivision depth " +
                              std::to_string(depth)) {}

OverlapMismatch::OverlapMismatch(const std::string& overlap, double mismatch, double tolerance)
    : Error("OverlapMismatch", "overlap " + overlap + " mismatch " + num(mismatch) +
                                   " exceeds tolerance " + num(tolerance)) {}

}  // namespace planefield
