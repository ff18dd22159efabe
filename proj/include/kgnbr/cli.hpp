#pragma once

#include <iosfwd>

namespace kgnbr::cli {

// Exit codes.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,        // unknown flag, bad flag value
    kIo = 3,           // missing or unreadable file
    kParse = 4,        // malformed input line
    kSchema = 5,       // record/file schema mismatch
    kNotFound = 6,     // unknown entity/relation/id
    kInvalid = 7,      // precondition violated
    kModel = 8,        // model adapter failure
};

// Runs the `kgnbr` command line. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kgnbr::cli
