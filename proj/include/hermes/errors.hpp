#pragma once

#include <stdexcept>
#include <string>

namespace hermes {

// Base class for every error the pipeline raises. The CLI maps subtypes
// onto its exit-code contract (see tools/hermes.cpp).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------- records

class ParseError : public Error {
public:
    using Error::Error;
};

class ReservedTermError : public Error {
public:
    using Error::Error;
};

class MalformedValueError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------- config

class ConfigError : public Error {
public:
    using Error::Error;
};

class ConfigFileNotFoundError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class TomlParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Carries the dotted key path of the offending setting in the message.
class SchemaError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class EnumError : public SchemaError {
public:
    using SchemaError::SchemaError;
};

// ---------------------------------------------------------------- cache

class PhaseOrderViolation : public Error {
public:
    PhaseOrderViolation(const std::string& msg, std::string missing)
        : Error(msg), missing_phase_(std::move(missing)) {}

    const std::string& missing_phase() const { return missing_phase_; }

private:
    std::string missing_phase_;
};

class ArtifactNotFoundError : public Error {
public:
    using Error::Error;
};

class NameInvalidError : public Error {
public:
    using Error::Error;
};

class ConcurrentRunError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------- plugins

class DuplicatePluginError : public Error {
public:
    using Error::Error;
};

// Unknown plugin names almost always come from a bad configuration value,
// so this participates in the configuration exit code.
class UnknownPluginError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class SettingsAccessError : public Error {
public:
    using Error::Error;
};

// Aggregated failure of one or more plugins within a phase.
class PluginFailure : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------- harvest

class FileNotFoundError : public Error {
public:
    using Error::Error;
};

class NotARepositoryError : public Error {
public:
    using Error::Error;
};

class UnknownBranchError : public Error {
public:
    using Error::Error;
};

class EmptyHistoryError : public Error {
public:
    using Error::Error;
};

class YamlParseError : public Error {
public:
    using Error::Error;
};

class CffValidationError : public Error {
public:
    using Error::Error;
};

class MissingProjectTableError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------- process

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class IncompatibleTypesError : public Error {
public:
    using Error::Error;
};

class IncompleteReportError : public Error {
public:
    using Error::Error;
};

class MissingProcessOutputError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------- deposit

class DepositError : public Error {
public:
    using Error::Error;
};

class AuthError : public DepositError {
public:
    using DepositError::DepositError;
};

class HttpError : public DepositError {
public:
    HttpError(const std::string& msg, int status)
        : DepositError(msg), status_(status) {}

    int status() const { return status_; }

private:
    int status_;
};

class ProtocolError : public DepositError {
public:
    using DepositError::DepositError;
};

class ProjectError : public DepositError {
public:
    using DepositError::DepositError;
};

class CreateError : public DepositError {
public:
    using DepositError::DepositError;
};

class UploadError : public DepositError {
public:
    using DepositError::DepositError;
};

class PublishError : public DepositError {
public:
    using DepositError::DepositError;
};

// ------------------------------------------------------------ postprocess

class ConfigEditError : public Error {
public:
    using Error::Error;
};

class InvalidDoiError : public Error {
public:
    using Error::Error;
};

} // namespace hermes
