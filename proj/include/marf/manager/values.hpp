#pragma once

#include <string>
#include <string_view>

#include "marf/smi/registry.hpp"
#include "marf/snmp/ber.hpp"

namespace marf::manager {

/// Text to a typed value for an object of syntax `syntax`. Enumerations accept
/// labels or numbers. Throws std::invalid_argument.
snmp::BerValue parse_value(const smi::Syntax& syntax, std::string_view text);

/// Like render(), but enumerated integers print as label(n) when `syntax` knows them.
std::string format_value(const smi::Syntax* syntax, const snmp::BerValue& value);

/// Syntax of the object an instance OID belongs to, or nullptr.
const smi::Syntax* syntax_of(const smi::MibRegistry& registry, const Oid& instance);

}  // namespace marf::manager
