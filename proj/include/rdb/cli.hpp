#pragma once

namespace rdb {

/// Command-line entry point. Exit codes: 0 pass, 1 check failure, 2 usage or
/// config error, 3 numerical instability or blow-up.
int cli_main(int argc, const char* const* argv);

}  // namespace rdb
