#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sinkatlas::cli {

// Exit codes: 0 success, 1 input error, 2 genericity error, 3 verification
// failure. `SINKATLAS_LOG` (error|warn|info|debug) controls stderr logging.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sinkatlas::cli
