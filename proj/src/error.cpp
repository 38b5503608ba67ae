#include "slln/error.hpp"

namespace slln {

std::string_view to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::ConfigParse: return "ConfigParse";
        case ErrorCategory::UnknownId: return "UnknownId";
        case ErrorCategory::Validation: return "Validation";
        case ErrorCategory::NumericDomain: return "NumericDomain";
        case ErrorCategory::InsufficientData: return "InsufficientData";
        case ErrorCategory::UnsupportedModel: return "UnsupportedModel";
        case ErrorCategory::Io: return "Io";
    }
    return "Unknown";
}

int exit_code(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::ConfigParse: return 2;
        case ErrorCategory::UnknownId: return 3;
        case ErrorCategory::Validation: return 4;
        case ErrorCategory::NumericDomain: return 5;
        case ErrorCategory::InsufficientData: return 6;
        case ErrorCategory::UnsupportedModel: return 7;
        case ErrorCategory::Io: return 8;
    }
    return 1;
}

}  // namespace slln
