#include "pxflow/error.hpp"

#include <sstream>

namespace pxflow {

namespace {
std::string exponent_message(std::size_t node, double value) {
  std::ostringstream os;
  os << "exponent must exceed 1 everywhere; node " << node << " has p = " << value;
  return os.str();
}
}  // namespace

InvalidExponent::InvalidExponent(std::size_t node, double value)
    : InvalidArgument(exponent_message(node, value)), node_(node), value_(value) {}

ConvergenceError::ConvergenceError(const std::string& what, double lower, double upper)
    : Error(what), lower_(lower), upper_(upper) {}

BlowUp::BlowUp(const std::string& what, long step) : Error(what), step_(step) {}

CflViolation::CflViolation(const std::string& what, double courant)
    : Error(what), courant_(courant) {}

}  // namespace pxflow
