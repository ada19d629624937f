#include "oilcast/errors.hpp"

namespace oilcast {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::fit: return "fit";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::assembly: return "assembly";
    case ErrorKind::split: return "split";
    case ErrorKind::scaling: return "scaling";
    case ErrorKind::state: return "state";
    case ErrorKind::training: return "training";
    case ErrorKind::selection: return "selection";
    case ErrorKind::format: return "format";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate_test: return "degenerate_test";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::bankruptcy: return "bankruptcy";
    }
    return "unknown";
}

} // namespace oilcast
