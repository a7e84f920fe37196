#include "marf/manager/table.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace marf::manager {

std::string to_string(const RowIndex& index) { return fmt::format("{}", fmt::join(index, ".")); }

std::optional<snmp::BerValue> RenderedTable::cell(const RowIndex& row, std::string_view column) const
{
    auto r = rows.find(row);
    if (r == rows.end()) return std::nullopt;
    auto c = r->second.find(std::string(column));
    if (c == r->second.end()) return std::nullopt;
    return c->second;
}

namespace {

std::string cell_text(const snmp::BerValue& v)
{
    if (const auto* i = std::get_if<snmp::Integer>(&v)) return std::to_string(i->value);
    if (const auto* c = std::get_if<snmp::Counter32>(&v)) return std::to_string(c->value);
    if (const auto* t = std::get_if<snmp::TimeTicks>(&v)) return std::to_string(t->value);
    if (const auto* o = std::get_if<snmp::OctetString>(&v)) return o->bytes;
    return snmp::render(v);
}

}  // namespace

RenderedTable table_render(const std::vector<snmp::Varbind>& walk, const smi::ResolvedTable& table)
{
    RenderedTable t;
    t.table = table.table_name;
    for (const auto& c : table.index_columns) t.index_names.push_back(c.name);
    std::vector<std::pair<Oid, std::string>> own;
    std::vector<std::pair<Oid, std::string>> inherited;
    for (const auto& c : table.effective_columns) {
        t.columns.push_back(c.name);
        if (!c.oid) continue;
        bool mine = table.entry_oid.is_strict_prefix_of(*c.oid);
        (mine ? own : inherited).push_back({*c.oid, c.name});
    }
    // Rows exist where the table's own columns have instances; inherited
    // columns only fill cells of those rows.
    for (const auto* set : {&own, &inherited}) {
        for (const auto& vb : walk) {
            if (snmp::is_exception(vb.value)) continue;
            for (const auto& [col, name] : *set) {
                if (!col.is_strict_prefix_of(vb.oid)) continue;
                auto idx = col.suffix_of(vb.oid);
                if (set == &own) t.rows[idx][name] = vb.value;
                else if (auto row = t.rows.find(idx); row != t.rows.end()) row->second[name] = vb.value;
                break;
            }
        }
    }
    return t;
}

std::string RenderedTable::to_text() const
{
    std::vector<std::string> shown;
    for (const auto& c : columns) {
        bool any = std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.second.count(c) > 0; });
        bool is_index = std::find(index_names.begin(), index_names.end(), c) != index_names.end();
        if (any && !is_index) shown.push_back(c);
    }
    std::vector<std::string> header;
    header.push_back(index_names.empty() ? std::string("index") : index_names.front());
    header.insert(header.end(), shown.begin(), shown.end());

    std::vector<std::vector<std::string>> cells;
    for (const auto& [idx, values] : rows) {
        std::vector<std::string> line{to_string(idx)};
        for (const auto& c : shown) {
            auto it = values.find(c);
            line.push_back(it == values.end() ? "-" : cell_text(it->second));
        }
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) {
        width[i] = header[i].size();
        for (const auto& l : cells) width[i] = std::max(width[i], l[i].size());
    }
    std::string out;
    auto emit = [&](const std::vector<std::string>& l) {
        for (std::size_t i = 0; i < l.size(); ++i) {
            out += fmt::format("{:<{}}", l[i], width[i]);
            out += i + 1 < l.size() ? "  " : "\n";
        }
    };
    emit(header);
    for (const auto& l : cells) emit(l);
    return out;
}

}  // namespace marf::manager
