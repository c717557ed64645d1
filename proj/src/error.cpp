#include "fundalloc/error.hpp"

namespace fundalloc {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::config: return "config";
        case ErrorKind::data: return "data";
        case ErrorKind::provider: return "provider";
        case ErrorKind::parse: return "parse";
        case ErrorKind::infeasible: return "infeasible";
    }
    return "?";
}

}  // namespace fundalloc
