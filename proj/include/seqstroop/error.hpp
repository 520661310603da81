#pragma once

#include <stdexcept>
#include <string>

namespace seqstroop {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller passed an argument that violates a documented precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A document failed schema validation. `field` and `trial_id` locate the
/// offending value; either may be empty when not applicable.
class ValidationError : public Error {
public:
    ValidationError(std::string field, std::string trial_id, const std::string& message)
        : Error(format(field, trial_id, message)),
          field_(std::move(field)),
          trial_id_(std::move(trial_id)) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& trial_id() const noexcept { return trial_id_; }

private:
    static std::string format(const std::string& field, const std::string& trial,
                              const std::string& message) {
        std::string out = message;
        if (!field.empty()) out += " [field: " + field + "]";
        if (!trial.empty()) out += " [trial: " + trial + "]";
        return out;
    }

    std::string field_;
    std::string trial_id_;
};

/// Stimulus text does not fit on the canvas.
class LayoutError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure (unreadable input, unwritable output).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace seqstroop
