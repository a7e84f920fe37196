#include "marf/pipeline/stage_wire.hpp"

#include <bit>

namespace marf::pipeline {

namespace {

class Out {
public:
    void u8(std::uint8_t v) { b.push_back(v); }
    void u32(std::uint32_t v)
    {
        for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double d)
    {
        auto v = std::bit_cast<std::uint64_t>(d);
        for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void raw(snmp::ByteView v) { b.insert(b.end(), v.begin(), v.end()); }
    snmp::Bytes b;
};

class In {
public:
    explicit In(snmp::ByteView b) : b_(b) {}
    std::uint8_t u8()
    {
        need(1);
        return b_[pos_++];
    }
    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{b_[pos_++]} << (8 * i);
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{b_[pos_++]} << (8 * i);
        return std::bit_cast<double>(v);
    }
    std::vector<double> reals(std::uint32_t n)
    {
        need(std::size_t{n} * 8);
        std::vector<double> out(n);
        for (auto& d : out) d = f64();
        return out;
    }
    snmp::ByteView rest()
    {
        auto r = b_.subspan(pos_);
        pos_ = b_.size();
        return r;
    }
    void end() const
    {
        if (pos_ != b_.size()) throw WireError(fmt::format("{} trailing bytes in stage payload", b_.size() - pos_));
    }

private:
    void need(std::size_t n) const
    {
        if (b_.size() - pos_ < n) throw WireError("truncated stage payload");
    }
    snmp::ByteView b_;
    std::size_t pos_ = 0;
};

void put(Out& o, const FeatureVector& fv)
{
    o.u8(static_cast<std::uint8_t>(fv.algorithm));
    o.u32(fv.poles);
    o.u32(fv.window_len);
    o.u32(static_cast<std::uint32_t>(fv.values.size()));
    for (double d : fv.values) o.f64(d);
}

FeatureVector get_features(In& in)
{
    FeatureVector fv;
    auto alg = in.u8();
    if (alg < 1 || alg > 3) throw WireError(fmt::format("unknown algorithm code {}", alg));
    fv.algorithm = static_cast<Algorithm>(alg);
    fv.poles = in.u32();
    fv.window_len = in.u32();
    fv.values = in.reals(in.u32());
    return fv;
}

snmp::Bytes ok(snmp::Bytes payload)
{
    payload.insert(payload.begin(), 0);
    return payload;
}

}  // namespace

namespace wire {

snmp::Bytes encode(const Sample& s)
{
    Out o;
    o.i32(s.format);
    o.i32(s.sample_rate_hz);
    o.u32(static_cast<std::uint32_t>(s.amplitudes.size()));
    for (double d : s.amplitudes) o.f64(d);
    return o.b;
}

snmp::Bytes encode(const FeatureVector& fv)
{
    Out o;
    put(o, fv);
    return o.b;
}

snmp::Bytes encode(const ResultSet& r)
{
    Out o;
    o.u32(static_cast<std::uint32_t>(r.ranked.size()));
    for (const auto& e : r.ranked) {
        o.i32(e.subject);
        o.f64(e.distance);
    }
    return o.b;
}

snmp::Bytes encode_train(std::int32_t subject, const FeatureVector& fv)
{
    Out o;
    o.i32(subject);
    put(o, fv);
    return o.b;
}

Sample decode_sample(snmp::ByteView b)
{
    In in(b);
    Sample s;
    s.format = in.i32();
    s.sample_rate_hz = in.i32();
    s.amplitudes = in.reals(in.u32());
    in.end();
    return s;
}

FeatureVector decode_features(snmp::ByteView b)
{
    In in(b);
    auto fv = get_features(in);
    in.end();
    return fv;
}

ResultSet decode_results(snmp::ByteView b)
{
    In in(b);
    ResultSet r;
    auto n = in.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        auto id = in.i32();
        r.ranked.push_back({id, in.f64()});
    }
    in.end();
    return r;
}

std::pair<std::int32_t, FeatureVector> decode_train(snmp::ByteView b)
{
    In in(b);
    auto id = in.i32();
    auto fv = get_features(in);
    in.end();
    return {id, std::move(fv)};
}

snmp::Bytes error_body(const PipelineError& e)
{
    Out o;
    o.u8(1);
    o.u8(static_cast<std::uint8_t>(e.code()));
    const auto* down = dynamic_cast<const ServiceDown*>(&e);
    o.u32(down ? down->service_index() : 0);
    std::string_view msg = e.what();
    o.raw({reinterpret_cast<const std::uint8_t*>(msg.data()), msg.size()});
    return o.b;
}

void raise_error_body(snmp::ByteView body)
{
    In in(body);
    if (in.u8() != 1) throw WireError("not an error response");
    auto code = static_cast<ErrorCode>(in.u8());
    auto index = in.u32();
    auto msg = in.rest();
    raise(code, std::string(msg.begin(), msg.end()), index);
}

}  // namespace wire

StageServer::StageServer(PipelineLinks handlers, const net::Endpoint& listen)
    : handlers_(std::move(handlers)), listener_(listen)
{
    acceptor_ = std::jthread([this](std::stop_token st) { accept_loop(st); });
}

StageServer::~StageServer() { stop(); }

void StageServer::stop()
{
    acceptor_.request_stop();
    if (acceptor_.joinable()) acceptor_.join();
    std::list<std::jthread> conns;
    {
        std::lock_guard lock(mutex_);
        conns.swap(connections_);
    }
    conns.clear();  // jthread requests stop and joins
}

void StageServer::accept_loop(std::stop_token st)
{
    while (!st.stop_requested()) {
        auto s = listener_.accept(std::chrono::milliseconds(50));
        if (!s) continue;
        std::lock_guard lock(mutex_);
        connections_.emplace_back([this, stream = std::move(*s)](std::stop_token cst) mutable {
            serve(cst, std::move(stream));
        });
    }
}

void StageServer::serve(std::stop_token st, net::TcpStream stream)
{
    try {
        while (!st.stop_requested()) {
            auto frame = stream.read_frame(std::chrono::milliseconds(100));
            if (!frame) continue;
            stream.write_frame(dispatch(*frame));
        }
    } catch (const net::ConnectionClosed&) {
    }
}

snmp::Bytes StageServer::dispatch(snmp::ByteView request) const
{
    try {
        if (request.empty()) throw WireError("empty stage request");
        auto op = static_cast<Opcode>(request[0]);
        auto payload = request.subspan(1);
        auto unavailable = [&] {
            return StageUnavailable(fmt::format("this endpoint does not serve opcode {}", request[0]));
        };
        switch (op) {
        case Opcode::Load:
            if (!handlers_.load) throw unavailable();
            return ok(wire::encode(handlers_.load(payload)));
        case Opcode::Preprocess:
            if (!handlers_.preprocess) throw unavailable();
            return ok(wire::encode(handlers_.preprocess(wire::decode_sample(payload))));
        case Opcode::Extract:
            if (!handlers_.extract) throw unavailable();
            return ok(wire::encode(handlers_.extract(wire::decode_sample(payload))));
        case Opcode::Classify:
            if (!handlers_.classify) throw unavailable();
            return ok(wire::encode(handlers_.classify(wire::decode_features(payload))));
        case Opcode::Train: {
            if (!handlers_.train) throw unavailable();
            auto [id, fv] = wire::decode_train(payload);
            handlers_.train(id, fv);
            return ok({});
        }
        }
        throw unavailable();
    } catch (const PipelineError& e) {
        return wire::error_body(e);
    } catch (const std::exception& e) {
        return wire::error_body(PipelineError(ErrorCode::Internal, e.what()));
    }
}

StageClient::StageClient(net::Endpoint target, std::chrono::milliseconds timeout)
    : target_(std::move(target)), timeout_(timeout)
{
}

snmp::Bytes StageClient::call(Opcode op, snmp::ByteView payload)
{
    snmp::Bytes body{static_cast<std::uint8_t>(op)};
    body.insert(body.end(), payload.begin(), payload.end());
    std::lock_guard lock(mutex_);
    std::optional<snmp::Bytes> resp;
    // A pooled connection may have been closed by a restarted server; retry once on a fresh one.
    for (int attempt = 0; attempt < 2 && !resp; ++attempt) {
        try {
            if (!stream_.is_open()) stream_ = net::TcpStream::connect(target_, timeout_);
            stream_.write_frame(body);
            resp = stream_.read_frame(timeout_);
            if (!resp) {
                stream_.close();
                throw StageUnavailable(fmt::format("stage at {} did not answer within {} ms", target_.str(),
                                                   timeout_.count()));
            }
        } catch (const net::ConnectionClosed& e) {
            stream_.close();
            if (attempt == 1) throw StageUnavailable(fmt::format("stage at {}: {}", target_.str(), e.what()));
        }
    }
    if (resp->empty()) throw StageUnavailable("empty stage response");
    if ((*resp)[0] != 0) wire::raise_error_body(*resp);
    resp->erase(resp->begin());
    return std::move(*resp);
}

PipelineLinks remote_links(const StageEndpoints& e, std::chrono::milliseconds timeout)
{
    auto load = std::make_shared<StageClient>(e.load, timeout);
    auto pre = std::make_shared<StageClient>(e.preprocess, timeout);
    auto fe = std::make_shared<StageClient>(e.extract, timeout);
    auto cls = std::make_shared<StageClient>(e.classify, timeout);
    PipelineLinks l;
    l.load = [load](snmp::ByteView b) { return wire::decode_sample(load->call(Opcode::Load, b)); };
    l.preprocess = [pre](const Sample& s) {
        return wire::decode_sample(pre->call(Opcode::Preprocess, wire::encode(s)));
    };
    l.extract = [fe](const Sample& s) { return wire::decode_features(fe->call(Opcode::Extract, wire::encode(s))); };
    l.classify = [cls](const FeatureVector& fv) {
        return wire::decode_results(cls->call(Opcode::Classify, wire::encode(fv)));
    };
    l.train = [cls](std::int32_t id, const FeatureVector& fv) {
        cls->call(Opcode::Train, wire::encode_train(id, fv));
    };
    return l;
}

}  // namespace marf::pipeline
