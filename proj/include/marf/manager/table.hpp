#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "marf/smi/augments.hpp"
#include "marf/snmp/message.hpp"

namespace marf::manager {

/// Instance suffix identifying a row ({3} for serviceIndex 3).
using RowIndex = std::vector<std::uint32_t>;
std::string to_string(const RowIndex& index);

/// A walked table laid out row-major.
struct RenderedTable {
    std::string table;
    /// Index objects, inherited through AUGMENTS when the table extends another.
    std::vector<std::string> index_names;
    /// Effective columns, base chain first.
    std::vector<std::string> columns;
    /// Row index (instance suffix) -> column name -> value. Missing cells are absent.
    std::map<RowIndex, std::map<std::string, snmp::BerValue>> rows;

    std::optional<snmp::BerValue> cell(const RowIndex& row, std::string_view column) const;
    /// Fixed-width text: index columns, then every column that has at least one value.
    std::string to_text() const;
};

/// Varbinds outside the table's columns are ignored.
RenderedTable table_render(const std::vector<snmp::Varbind>& walk, const smi::ResolvedTable& table);

}  // namespace marf::manager
