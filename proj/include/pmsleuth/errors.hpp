#pragma once

#include <stdexcept>
#include <string>

namespace pmsleuth {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class HexError : public Error {
public:
    using Error::Error;
};

/// Input looks like constructor/creation bytecode instead of runtime code.
class CreationCodeError : public Error {
public:
    using Error::Error;
};

/// JSON-RPC transport failure (connection refused, timeout). Retryable.
class RpcTransportError : public Error {
public:
    RpcTransportError(const std::string& msg, std::string endpoint, std::string slot_hex)
        : Error(msg), endpoint_(std::move(endpoint)), slot_hex_(std::move(slot_hex)) {}
    const std::string& endpoint() const { return endpoint_; }
    const std::string& slot_hex() const { return slot_hex_; }

private:
    std::string endpoint_;
    std::string slot_hex_;
};

/// JSON-RPC returned a malformed or non-hex body.
class RpcProtocolError : public Error {
public:
    using Error::Error;
};

/// Explorer API transport failure after retries were exhausted.
class ExplorerError : public Error {
public:
    using Error::Error;
};

class AstParseError : public Error {
public:
    AstParseError(const std::string& msg, std::size_t byte_offset)
        : Error(msg), byte_offset_(byte_offset) {}
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_ = 0;
};

/// AST node is missing a required field (id, src, ...).
class AstSchemaError : public Error {
public:
    using Error::Error;
};

/// Signature text is not in canonical ABI form.
class SignatureError : public Error {
public:
    using Error::Error;
};

/// A parameter type that ABI canonicalization does not support.
class AbiTypeError : public Error {
public:
    using Error::Error;
};

/// Requested entity (entry function, occurrence, ...) does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// LLM backend failed to produce a completion.
class LlmBackendError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace pmsleuth
