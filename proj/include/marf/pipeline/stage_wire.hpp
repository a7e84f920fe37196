#pragma once

#include <chrono>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <thread>

#include "marf/net/tcp.hpp"
#include "marf/pipeline/services.hpp"

namespace marf::pipeline {

// Stage requests travel over TCP as frames: a u32 big-endian body length,
// then the body. A request body is an opcode byte and its payload; a response
// body is a status byte (0 ok, 1 error) and either the result payload or
// (u8 error code, u32 service index, UTF-8 message). Payload integers and
// reals are little-endian.

enum class Opcode : std::uint8_t { Load = 1, Preprocess = 2, Extract = 3, Classify = 4, Train = 5 };

class WireError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace wire {

/// i32 format, i32 rate, u32 n, n x f64.
snmp::Bytes encode(const Sample& s);
/// u8 algorithm, u32 poles, u32 window, u32 n, n x f64.
snmp::Bytes encode(const FeatureVector& fv);
/// u32 n, n x (i32 subject, f64 distance).
snmp::Bytes encode(const ResultSet& r);
/// i32 subject, then the feature vector.
snmp::Bytes encode_train(std::int32_t subject, const FeatureVector& fv);

/// Each requires the payload to be consumed exactly; throws WireError.
Sample decode_sample(snmp::ByteView b);
FeatureVector decode_features(snmp::ByteView b);
ResultSet decode_results(snmp::ByteView b);
std::pair<std::int32_t, FeatureVector> decode_train(snmp::ByteView b);

snmp::Bytes error_body(const PipelineError& e);
/// Raises the typed pipeline error carried by an error body.
[[noreturn]] void raise_error_body(snmp::ByteView body);

}  // namespace wire

/// Serves the stages present in `handlers`; opcodes without a handler get StageUnavailable.
class StageServer {
public:
    StageServer(PipelineLinks handlers, const net::Endpoint& listen);
    ~StageServer();
    StageServer(const StageServer&) = delete;
    StageServer& operator=(const StageServer&) = delete;

    std::uint16_t port() const { return listener_.port(); }
    void stop();

    /// Body in, body out; never throws.
    snmp::Bytes dispatch(snmp::ByteView request) const;

private:
    void accept_loop(std::stop_token st);
    void serve(std::stop_token st, net::TcpStream stream);

    PipelineLinks handlers_;
    net::TcpListener listener_;
    std::mutex mutex_;
    std::list<std::jthread> connections_;
    std::jthread acceptor_;
};

/// One persistent connection to a stage server, reopened on failure.
class StageClient {
public:
    explicit StageClient(net::Endpoint target, std::chrono::milliseconds timeout = std::chrono::seconds(10));

    /// Result payload. Throws the remote PipelineError, or StageUnavailable
    /// when the server cannot be reached.
    snmp::Bytes call(Opcode op, snmp::ByteView payload);

private:
    net::Endpoint target_;
    std::chrono::milliseconds timeout_;
    std::mutex mutex_;
    net::TcpStream stream_;
};

struct StageEndpoints {
    net::Endpoint load, preprocess, extract, classify;
};

PipelineLinks remote_links(const StageEndpoints& endpoints,
                           std::chrono::milliseconds timeout = std::chrono::seconds(10));

}  // namespace marf::pipeline
