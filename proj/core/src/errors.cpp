#include "dglift/errors.hpp"

namespace dglift {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::IllFormedPresentation: return "IllFormedPresentation";
    case ErrorKind::OwnerMismatch: return "OwnerMismatch";
    case ErrorKind::NotTriangular: return "NotTriangular";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::DSquaredNonzero: return "DSquaredNonzero";
    case ErrorKind::NotAChainMap: return "NotAChainMap";
    case ErrorKind::TriangularityUnrepairable: return "TriangularityUnrepairable";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotExact: return "NotExact";
    case ErrorKind::FiltrationStuck: return "FiltrationStuck";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
  }
  return "Error";
}

}  // namespace dglift
