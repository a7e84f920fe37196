#pragma once

#include <netinet/in.h>

#include "marf/net/udp.hpp"

namespace marf::net {

/// Resolves an IPv4 endpoint; "", "*" and "0.0.0.0" mean any address.
sockaddr_in to_sockaddr(const Endpoint& ep);

}  // namespace marf::net
