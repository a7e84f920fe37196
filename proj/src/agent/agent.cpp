#include "marf/agent/agent.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <variant>

#include <fmt/format.h>

namespace marf::agent {

using snmp::PduKind;

DuplicateRegistration::DuplicateRegistration(const Oid& oid)
    : std::runtime_error(fmt::format("OID {} is already registered", oid.str())), oid_(oid)
{
}

const BerValue* PendingSet::find(const Oid& oid) const
{
    for (const auto& vb : vbs_) {
        if (vb.oid == oid) return &vb.value;
    }
    return nullptr;
}

ErrorStatus RowSource::validate(const smi::ColumnDef&, std::uint32_t, const BerValue&, const PendingSet&) const
{
    return ErrorStatus::NoError;
}

void RowSource::commit(const smi::ColumnDef&, std::uint32_t, const BerValue&) {}

ErrorStatus check_syntax(const smi::Syntax& syntax, const BerValue& value)
{
    using smi::SyntaxKind;
    switch (syntax.kind) {
    case SyntaxKind::Integer:
    case SyntaxKind::IntegerEnum: {
        const auto* v = std::get_if<snmp::Integer>(&value);
        if (!v) return ErrorStatus::WrongType;
        if (v->value < std::numeric_limits<std::int32_t>::min() || v->value > std::numeric_limits<std::int32_t>::max()) {
            return ErrorStatus::WrongValue;
        }
        if (syntax.kind == SyntaxKind::IntegerEnum) {
            bool known = std::any_of(syntax.labels.begin(), syntax.labels.end(),
                                     [&](const auto& l) { return l.second == v->value; });
            if (!known) return ErrorStatus::WrongValue;
        }
        if (syntax.range && (v->value < syntax.range->first || v->value > syntax.range->second)) {
            return ErrorStatus::WrongValue;
        }
        return ErrorStatus::NoError;
    }
    case SyntaxKind::Counter32:
        return std::holds_alternative<snmp::Counter32>(value) ? ErrorStatus::NoError : ErrorStatus::WrongType;
    case SyntaxKind::TimeTicks:
        return std::holds_alternative<snmp::TimeTicks>(value) ? ErrorStatus::NoError : ErrorStatus::WrongType;
    case SyntaxKind::OctetString:
    case SyntaxKind::DisplayString: {
        const auto* v = std::get_if<snmp::OctetString>(&value);
        if (!v) return ErrorStatus::WrongType;
        auto n = static_cast<std::int64_t>(v->bytes.size());
        if (syntax.range && (n < syntax.range->first || n > syntax.range->second)) {
            return ErrorStatus::WrongLength;
        }
        return ErrorStatus::NoError;
    }
    case SyntaxKind::ObjectId:
        return std::holds_alternative<Oid>(value) ? ErrorStatus::NoError : ErrorStatus::WrongType;
    default: return ErrorStatus::NoError;
    }
}

namespace {

struct Column {
    smi::ColumnDef def;
    std::shared_ptr<RowSource> rows;
};

struct Route {
    Oid subtree;
    std::shared_ptr<net::Transport> target;
};

/// A resolved local instance.
struct Binding {
    const ManagedObject* scalar = nullptr;
    const Column* column = nullptr;
    std::uint32_t row = 0;
};

struct Failure {
    ErrorStatus status;
};

using ReadResult = std::variant<BerValue, Failure>;

std::vector<std::uint32_t> sorted_rows(const RowSource& src)
{
    auto rows = src.rows();
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

SnmpMessage response_to(const SnmpMessage& req)
{
    SnmpMessage r;
    r.version = req.version;
    r.community = req.community;
    r.pdu.kind = PduKind::Response;
    r.pdu.request_id = req.pdu.request_id;
    return r;
}

SnmpMessage error_response(const SnmpMessage& req, ErrorStatus status, std::int32_t index)
{
    auto r = response_to(req);
    r.pdu.error_status = static_cast<std::int32_t>(status);
    r.pdu.error_index = index;
    r.pdu.varbinds = req.pdu.varbinds;
    return r;
}

}  // namespace

struct Agent::Impl {
    std::mutex mutex;
    std::map<Oid, ManagedObject> scalars;
    std::set<Oid> scalar_objects;
    std::map<Oid, Column> columns;
    std::set<Oid> entries;
    std::vector<Route> routes;
    std::atomic<std::int32_t> next_request_id{0x4d41};
    std::mutex trap_mutex;
    std::optional<net::UdpSocket> trap_socket;

    // ---- local registry ----

    std::optional<Binding> exact(const Oid& oid) const
    {
        if (auto it = scalars.find(oid); it != scalars.end()) {
            return Binding{&it->second, nullptr, 0};
        }
        auto it = columns.upper_bound(oid);
        if (it == columns.begin()) return std::nullopt;
        --it;
        if (!it->first.is_strict_prefix_of(oid) || oid.size() != it->first.size() + 1) return std::nullopt;
        auto row = oid.back();
        auto rows = sorted_rows(*it->second.rows);
        if (!std::binary_search(rows.begin(), rows.end(), row)) return std::nullopt;
        return Binding{nullptr, &it->second, row};
    }

    /// True when `oid` names a registered object type but no instance of it.
    bool known_object(const Oid& oid) const
    {
        std::vector<std::uint32_t> arcs(oid.arcs().begin(), oid.arcs().end());
        while (arcs.size() > 2) {
            arcs.pop_back();
            Oid prefix(arcs);
            if (columns.count(prefix) || scalar_objects.count(prefix)) return true;
        }
        return false;
    }

    std::optional<Oid> raw_next(const Oid& q) const
    {
        std::optional<Oid> best;
        if (auto it = scalars.upper_bound(q); it != scalars.end()) {
            best = it->first;
        }
        auto it = columns.upper_bound(q);
        if (it != columns.begin()) {
            auto prev = std::prev(it);
            if (prev->first.is_prefix_of(q)) it = prev;
        }
        for (; it != columns.end(); ++it) {
            if (best && *best < it->first) break;
            auto rows = sorted_rows(*it->second.rows);
            std::optional<std::uint32_t> row;
            if (it->first.is_prefix_of(q)) {
                if (q.size() == it->first.size()) {
                    if (!rows.empty()) row = rows.front();
                } else {
                    auto after = q[it->first.size()];
                    auto r = std::upper_bound(rows.begin(), rows.end(), after);
                    if (r != rows.end()) row = *r;
                }
            } else if (!rows.empty()) {
                row = rows.front();
            }
            if (row) {
                auto cand = it->first.child(*row);
                if (!best || cand < *best) best = cand;
                break;
            }
        }
        return best;
    }

    ReadResult read(const Binding& b) const
    {
        try {
            if (b.scalar) return b.scalar->read();
            return b.column->rows->read(b.column->def, b.row);
        } catch (const SubAgentTimeout&) {
            return Failure{ErrorStatus::GenErr};
        } catch (const std::exception&) {
            return Failure{ErrorStatus::GenErr};
        }
    }

    // ---- routing ----

    const Route* route_for(const Oid& oid) const
    {
        const Route* best = nullptr;
        for (const auto& r : routes) {
            if (r.subtree.is_prefix_of(oid) && (!best || r.subtree.size() > best->subtree.size())) best = &r;
        }
        return best;
    }

    std::optional<SnmpMessage> forward(const Route& r, const SnmpMessage& original, PduKind kind,
                                       std::vector<Varbind> vbs, std::int32_t non_rep = 0, std::int32_t max_rep = 0)
    {
        SnmpMessage m;
        m.community = original.community;
        m.pdu.kind = kind;
        m.pdu.request_id = next_request_id++;
        m.pdu.error_status = non_rep;
        m.pdu.error_index = max_rep;
        m.pdu.varbinds = std::move(vbs);
        try {
            auto resp = r.target->exchange(m);
            if (resp && resp->pdu.request_id == m.pdu.request_id) return resp;
        } catch (const std::exception&) {
        }
        return std::nullopt;
    }
};

Agent::Agent(AgentConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>()), started_(std::chrono::steady_clock::now())
{
}

Agent::~Agent() = default;

void Agent::register_object(ManagedObject object)
{
    std::lock_guard lock(impl_->mutex);
    if (impl_->scalars.count(object.oid) || impl_->exact(object.oid) || impl_->columns.count(object.oid)) {
        throw DuplicateRegistration(object.oid);
    }
    if (object.access == smi::Access::ReadWrite && !object.write) {
        throw std::invalid_argument(fmt::format("read-write object {} has no write delegate", object.oid.str()));
    }
    if (object.access != smi::Access::ReadWrite) {
        object.write.reset();
    }
    if (object.oid.size() > 2) {
        std::vector<std::uint32_t> arcs(object.oid.arcs().begin(), object.oid.arcs().end() - 1);
        impl_->scalar_objects.insert(Oid(std::move(arcs)));
    }
    auto key = object.oid;
    impl_->scalars.emplace(std::move(key), std::move(object));
}

void Agent::register_table(const smi::ResolvedTable& table, std::shared_ptr<RowSource> rows)
{
    std::lock_guard lock(impl_->mutex);
    if (impl_->entries.count(table.entry_oid)) {
        throw DuplicateRegistration(table.entry_oid);
    }
    std::vector<Column> cols;
    for (const auto& c : table.effective_columns) {
        if (!c.oid || c.access == smi::Access::NotAccessible || !table.entry_oid.is_strict_prefix_of(*c.oid)) {
            continue;
        }
        if (impl_->columns.count(*c.oid)) {
            throw DuplicateRegistration(*c.oid);
        }
        auto clash = impl_->scalars.lower_bound(*c.oid);
        if (clash != impl_->scalars.end() && c.oid->is_prefix_of(clash->first)) {
            throw DuplicateRegistration(clash->first);
        }
        cols.push_back({c, rows});
    }
    impl_->entries.insert(table.entry_oid);
    for (auto& c : cols) {
        auto key = *c.def.oid;
        impl_->columns.emplace(std::move(key), std::move(c));
    }
}

void Agent::add_route(const Oid& subtree, std::shared_ptr<net::Transport> target)
{
    std::lock_guard lock(impl_->mutex);
    for (const auto& r : impl_->routes) {
        if (r.subtree == subtree) throw DuplicateRegistration(subtree);
    }
    impl_->routes.push_back({subtree, std::move(target)});
    std::sort(impl_->routes.begin(), impl_->routes.end(),
              [](const Route& a, const Route& b) { return a.subtree < b.subtree; });
}

snmp::TimeTicks Agent::uptime() const
{
    auto cs = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started_).count() / 10;
    return snmp::TimeTicks{static_cast<std::uint32_t>(cs)};
}

std::vector<Varbind> Agent::dump()
{
    std::lock_guard lock(impl_->mutex);
    std::vector<Varbind> out;
    Oid cur{0, 0};
    while (auto next = impl_->raw_next(cur)) {
        auto b = impl_->exact(*next);
        BerValue v = snmp::Null{};
        if (b) {
            auto r = impl_->read(*b);
            if (auto* val = std::get_if<BerValue>(&r)) v = *val;
        }
        out.push_back({*next, v});
        cur = *next;
    }
    return out;
}

namespace {

/// Evaluation of one request, with or without routing.
class Evaluator {
public:
    Evaluator(Agent::Impl& impl, const AgentConfig& cfg, const SnmpMessage& req, bool routed)
        : impl_(impl), cfg_(cfg), req_(req), routed_(routed)
    {
    }

    SnmpMessage run()
    {
        switch (req_.pdu.kind) {
        case PduKind::Get: return get();
        case PduKind::GetNext: return getnext();
        case PduKind::GetBulk: return getbulk();
        case PduKind::Set: return set();
        default: return error_response(req_, ErrorStatus::GenErr, 0);
        }
    }

private:
    struct Slot {
        Varbind vb;
        ErrorStatus err = ErrorStatus::NoError;
    };

    const Route* route(const Oid& oid) const { return routed_ ? impl_.route_for(oid) : nullptr; }

    SnmpMessage finish(std::vector<Slot> slots)
    {
        auto r = response_to(req_);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].err != ErrorStatus::NoError && r.pdu.error_status == 0) {
                r.pdu.error_status = static_cast<std::int32_t>(slots[i].err);
                r.pdu.error_index = static_cast<std::int32_t>(i + 1);
            }
            r.pdu.varbinds.push_back(std::move(slots[i].vb));
        }
        return size_checked(std::move(r));
    }

    SnmpMessage size_checked(SnmpMessage r)
    {
        if (snmp::encode_message(r).size() > cfg_.max_message_size) {
            auto tb = response_to(req_);
            tb.pdu.error_status = static_cast<std::int32_t>(ErrorStatus::TooBig);
            return tb;
        }
        return r;
    }

    Slot local_get(const Oid& oid)
    {
        if (auto b = impl_.exact(oid)) {
            auto r = impl_.read(*b);
            if (auto* f = std::get_if<Failure>(&r)) return {{oid, snmp::Null{}}, f->status};
            return {{oid, std::get<BerValue>(r)}, ErrorStatus::NoError};
        }
        if (impl_.known_object(oid)) return {{oid, snmp::NoSuchInstance{}}};
        return {{oid, snmp::NoSuchObject{}}};
    }

    SnmpMessage get()
    {
        const auto& in = req_.pdu.varbinds;
        std::vector<Slot> slots(in.size());
        std::map<const Route*, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (const auto* r = route(in[i].oid)) {
                groups[r].push_back(i);
            } else {
                slots[i] = local_get(in[i].oid);
            }
        }
        for (const auto& [r, positions] : groups) {
            std::vector<Varbind> vbs;
            for (auto p : positions) vbs.push_back({in[p].oid, snmp::Null{}});
            auto resp = impl_.forward(*r, req_, PduKind::Get, vbs);
            bool ok = resp && resp->pdu.varbinds.size() == positions.size();
            for (std::size_t k = 0; k < positions.size(); ++k) {
                auto p = positions[k];
                if (!ok) {
                    slots[p] = {{in[p].oid, snmp::Null{}}, ErrorStatus::GenErr};
                    continue;
                }
                slots[p].vb = resp->pdu.varbinds[k];
                if (resp->pdu.error_status != 0 && resp->pdu.error_index == static_cast<std::int32_t>(k + 1)) {
                    slots[p].err = static_cast<ErrorStatus>(resp->pdu.error_status);
                }
            }
            if (ok && resp->pdu.error_status != 0 && resp->pdu.error_index == 0) {
                for (auto p : positions) slots[p].err = static_cast<ErrorStatus>(resp->pdu.error_status);
            }
        }
        return finish(std::move(slots));
    }

    /// Successor of `q` across local objects and routed subtrees.
    Slot next(const Oid& q)
    {
        std::optional<Varbind> best;
        ErrorStatus err = ErrorStatus::NoError;

        Oid cur = q;
        while (auto cand = impl_.raw_next(cur)) {
            if (route(*cand)) {
                cur = *cand;
                continue;
            }
            auto b = impl_.exact(*cand);
            auto r = impl_.read(*b);
            if (auto* f = std::get_if<Failure>(&r)) {
                return {{*cand, snmp::Null{}}, f->status};
            }
            best = Varbind{*cand, std::get<BerValue>(r)};
            break;
        }

        if (routed_) {
            for (const auto& r : impl_.routes) {
                if (best && best->oid < r.subtree) break;
                bool inside = r.subtree.is_prefix_of(q);
                if (!inside && r.subtree < q) continue;
                auto resp = impl_.forward(r, req_, PduKind::GetNext, {{inside ? q : r.subtree, snmp::Null{}}});
                if (!resp || resp->pdu.varbinds.size() != 1) {
                    err = ErrorStatus::GenErr;
                    break;
                }
                if (resp->pdu.error_status != 0) {
                    err = static_cast<ErrorStatus>(resp->pdu.error_status);
                    break;
                }
                const auto& vb = resp->pdu.varbinds.front();
                if (std::holds_alternative<snmp::EndOfMibView>(vb.value) || !r.subtree.is_strict_prefix_of(vb.oid) ||
                    !(q < vb.oid) || impl_.route_for(vb.oid) != &r) {
                    continue;
                }
                if (!best || vb.oid < best->oid) best = vb;
            }
        }
        if (err != ErrorStatus::NoError) return {{q, snmp::Null{}}, err};
        if (!best) return {{q, snmp::EndOfMibView{}}};
        return {*best};
    }

    SnmpMessage getnext()
    {
        std::vector<Slot> slots;
        for (const auto& vb : req_.pdu.varbinds) slots.push_back(next(vb.oid));
        return finish(std::move(slots));
    }

    SnmpMessage getbulk()
    {
        const auto& in = req_.pdu.varbinds;
        auto n = static_cast<std::size_t>(std::clamp<std::int64_t>(req_.pdu.error_status, 0, static_cast<std::int64_t>(in.size())));
        auto m = static_cast<std::size_t>(std::max<std::int32_t>(req_.pdu.error_index, 0));

        auto r = response_to(req_);
        // Envelope plus slack for the three enclosing length fields growing.
        std::size_t budget = cfg_.max_message_size;
        std::size_t used = snmp::encode_message(r).size() + 12;
        auto fits = [&](const Varbind& vb) {
            snmp::Bytes b;
            // Includes a list header of its own, so the estimate errs on the large side.
            snmp::encode_varbinds({vb}, b);
            std::size_t size = b.size();
            if (used + size > budget) return false;
            used += size;
            return true;
        };

        for (std::size_t i = 0; i < n; ++i) {
            auto s = next(in[i].oid);
            if (s.err != ErrorStatus::NoError) return error_response(req_, s.err, static_cast<std::int32_t>(i + 1));
            if (!fits(s.vb)) return size_checked(error_response(req_, ErrorStatus::TooBig, 0));
            r.pdu.varbinds.push_back(std::move(s.vb));
        }
        std::vector<Oid> cursor;
        for (std::size_t i = n; i < in.size(); ++i) cursor.push_back(in[i].oid);
        for (std::size_t round = 0; round < m && !cursor.empty(); ++round) {
            bool all_end = true;
            for (std::size_t j = 0; j < cursor.size(); ++j) {
                auto s = next(cursor[j]);
                if (s.err != ErrorStatus::NoError) {
                    return error_response(req_, s.err, static_cast<std::int32_t>(n + j + 1));
                }
                if (!fits(s.vb)) {
                    if (r.pdu.varbinds.empty()) return size_checked(error_response(req_, ErrorStatus::TooBig, 0));
                    return r;
                }
                if (!std::holds_alternative<snmp::EndOfMibView>(s.vb.value)) all_end = false;
                cursor[j] = s.vb.oid;
                r.pdu.varbinds.push_back(std::move(s.vb));
            }
            if (all_end) break;
        }
        return r;
    }

    ErrorStatus validate_local(const Varbind& vb, const PendingSet& pending) const
    {
        auto b = impl_.exact(vb.oid);
        if (!b) return ErrorStatus::NoSuchName;
        if (b->scalar) {
            const auto& obj = *b->scalar;
            if (obj.access != smi::Access::ReadWrite || !obj.write) return ErrorStatus::NotWritable;
            if (obj.syntax) {
                if (auto s = check_syntax(*obj.syntax, vb.value); s != ErrorStatus::NoError) return s;
            }
            return obj.write->validate ? obj.write->validate(vb.value, pending) : ErrorStatus::NoError;
        }
        const auto& col = *b->column;
        if (col.def.access != smi::Access::ReadWrite) return ErrorStatus::NotWritable;
        if (auto s = check_syntax(col.def.syntax, vb.value); s != ErrorStatus::NoError) return s;
        return col.rows->validate(col.def, b->row, vb.value, pending);
    }

    void commit_local(const Varbind& vb)
    {
        auto b = impl_.exact(vb.oid);
        if (b->scalar) {
            if (b->scalar->write->commit) b->scalar->write->commit(vb.value);
        } else {
            b->column->rows->commit(b->column->def, b->row, vb.value);
        }
    }

    SnmpMessage set()
    {
        const auto& in = req_.pdu.varbinds;
        PendingSet pending(in);
        const Route* remote = nullptr;
        std::vector<std::size_t> remote_pos;

        // Phase 1: validate everything.
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (const auto* r = route(in[i].oid)) {
                if (remote && remote != r) {
                    // Two sub-agents cannot be committed atomically.
                    return error_response(req_, ErrorStatus::GenErr, static_cast<std::int32_t>(i + 1));
                }
                remote = r;
                remote_pos.push_back(i);
                continue;
            }
            auto s = validate_local(in[i], pending);
            if (s != ErrorStatus::NoError) {
                return error_response(req_, s, static_cast<std::int32_t>(i + 1));
            }
        }
        // The sub-agent validates and commits its share atomically; local
        // commits happen only after it succeeds.
        if (remote) {
            std::vector<Varbind> vbs;
            for (auto p : remote_pos) vbs.push_back(in[p]);
            auto resp = impl_.forward(*remote, req_, PduKind::Set, vbs);
            if (!resp) {
                return error_response(req_, ErrorStatus::GenErr, static_cast<std::int32_t>(remote_pos.front() + 1));
            }
            if (resp->pdu.error_status != 0) {
                auto idx = resp->pdu.error_index;
                std::int32_t mapped = idx >= 1 && static_cast<std::size_t>(idx) <= remote_pos.size()
                                          ? static_cast<std::int32_t>(remote_pos[static_cast<std::size_t>(idx - 1)] + 1)
                                          : 0;
                return error_response(req_, static_cast<ErrorStatus>(resp->pdu.error_status), mapped);
            }
        }
        // Phase 2: commit.
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (!route(in[i].oid)) commit_local(in[i]);
        }
        auto r = response_to(req_);
        r.pdu.varbinds = in;
        return r;
    }

    Agent::Impl& impl_;
    const AgentConfig& cfg_;
    const SnmpMessage& req_;
    bool routed_;
};

}  // namespace

std::optional<SnmpMessage> Agent::admit(const SnmpMessage& request, bool routed)
{
    const auto& c = request.community;
    switch (request.pdu.kind) {
    case PduKind::Get:
    case PduKind::GetNext:
    case PduKind::GetBulk:
        if (c != config_.read_community && c != config_.write_community) {
            if (!config_.respond_to_bad_community) return std::nullopt;
            return error_response(request, ErrorStatus::NoAccess, 0);
        }
        break;
    case PduKind::Set:
        if (c != config_.write_community) {
            if (config_.drop_bad_set_community) return std::nullopt;
            return error_response(request, ErrorStatus::NoAccess, 0);
        }
        break;
    default: return std::nullopt;
    }
    std::lock_guard lock(impl_->mutex);
    return Evaluator(*impl_, config_, request, routed).run();
}

std::optional<SnmpMessage> Agent::handle_pdu(const SnmpMessage& request) { return admit(request, false); }

std::optional<SnmpMessage> Agent::route_or_serve(const SnmpMessage& request) { return admit(request, true); }

TrapEvent Agent::make_trap(const Oid& notification, std::vector<Varbind> varbinds) const
{
    return TrapEvent{notification, std::move(varbinds), uptime()};
}

void Agent::set_trap_sinks(std::vector<net::Endpoint> sinks)
{
    std::lock_guard lock(impl_->trap_mutex);
    config_.trap_sinks = std::move(sinks);
}

SnmpMessage trap_message(const TrapEvent& event, std::string community, std::int32_t request_id)
{
    SnmpMessage m;
    m.community = std::move(community);
    m.pdu.kind = PduKind::Trap;
    m.pdu.request_id = request_id;
    m.pdu.varbinds.push_back({kSysUpTime0, event.timestamp});
    m.pdu.varbinds.push_back({kSnmpTrapOid0, event.notification});
    m.pdu.varbinds.insert(m.pdu.varbinds.end(), event.varbinds.begin(), event.varbinds.end());
    return m;
}

void Agent::emit_trap(const TrapEvent& event, const std::vector<net::Endpoint>* sinks)
{
    std::lock_guard lock(impl_->trap_mutex);
    const auto& targets = sinks ? *sinks : config_.trap_sinks;
    if (targets.empty()) return;
    auto bytes = snmp::encode_message(trap_message(event, config_.trap_community, impl_->next_request_id++));
    if (!impl_->trap_socket) {
        impl_->trap_socket.emplace();
        impl_->trap_socket->bind(net::Endpoint{"0.0.0.0", 0});
    }
    for (const auto& sink : targets) {
        impl_->trap_socket->send_to(bytes, sink);
        ++traps_sent_;
    }
}

}  // namespace marf::agent
