#pragma once

#include <exception>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace stverif {

// One diagnostic, printed as "path:line:col: code: message".
struct Diagnostic {
    std::string path;
    int line = 0;
    int col = 0;
    std::string code;
    std::string message;

    std::string str() const {
        std::ostringstream os;
        os << (path.empty() ? "<input>" : path) << ':' << line << ':' << col << ": " << code
           << ": " << message;
        return os.str();
    }
};

class StError : public std::exception {
  public:
    explicit StError(Diagnostic d) : diags_{std::move(d)} { join(); }
    explicit StError(std::vector<Diagnostic> ds) : diags_(std::move(ds)) { join(); }

    const std::vector<Diagnostic>& diagnostics() const { return diags_; }
    const char* what() const noexcept override { return text_.c_str(); }

  private:
    void join() {
        for (const auto& d : diags_) {
            if (!text_.empty()) text_ += '\n';
            text_ += d.str();
        }
    }
    std::vector<Diagnostic> diags_;
    std::string text_;
};

[[noreturn]] inline void fail(std::string path, int line, int col, std::string code,
                              std::string message) {
    throw StError(Diagnostic{std::move(path), line, col, std::move(code), std::move(message)});
}

} // namespace stverif
