#include "tonscan/frontend/includes.hpp"

#include <algorithm>
#include <map>

#include "tonscan/frontend/lexer.hpp"

namespace tonscan::frontend {
namespace fs = std::filesystem;

namespace {

std::string describeChain(const std::vector<fs::path>& chain) {
    std::string out = "include cycle: ";
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) out += " -> ";
        out += chain[i].string();
    }
    return out;
}

struct IncludeRef {
    std::string path;
    Span span;
};

std::vector<IncludeRef> scanIncludes(const std::string& text, FileId id) {
    std::vector<IncludeRef> out;
    const auto toks = tokenize(text, id);
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        if (toks[i].kind != TokenKind::Directive || toks[i].text != "#include") continue;
        const Token& arg = toks[i + 1];
        if (arg.kind != TokenKind::StringLiteral) continue;
        out.push_back({arg.text.substr(1, arg.text.rfind('"') - 1), Span::cover(toks[i].span, arg.span)});
    }
    return out;
}

class Resolver {
public:
    Resolver(SourceManager& sources, const std::vector<fs::path>& dirs) : sources_(sources), dirs_(dirs) {}

    void visit(const fs::path& path) {
        const fs::path key = fs::weakly_canonical(path);
        if (done_.count(key)) return;
        if (auto it = std::find(stack_.begin(), stack_.end(), key); it != stack_.end()) {
            std::vector<fs::path> chain(it, stack_.end());
            chain.push_back(key);
            throw IncludeCycle(std::move(chain));
        }
        const FileId id = sources_.load(path);
        stack_.push_back(key);
        for (const auto& ref : scanIncludes(sources_.file(id).text, id)) {
            visit(locate(ref, path.parent_path()));
        }
        stack_.pop_back();
        done_.emplace(key, id);
        order_.push_back(id);
    }

    std::vector<FileId> take() { return std::move(order_); }

private:
    fs::path locate(const IncludeRef& ref, const fs::path& baseDir) const {
        const fs::path rel(ref.path);
        if (rel.is_absolute()) {
            if (fs::is_regular_file(rel)) return rel;
            throw IncludeNotFound(ref.path, ref.span);
        }
        if (fs::is_regular_file(baseDir / rel)) return baseDir / rel;
        for (const auto& dir : dirs_) {
            if (fs::is_regular_file(dir / rel)) return dir / rel;
        }
        throw IncludeNotFound(ref.path, ref.span);
    }

    SourceManager& sources_;
    const std::vector<fs::path>& dirs_;
    std::map<fs::path, FileId> done_;
    std::vector<fs::path> stack_;
    std::vector<FileId> order_;
};

}  // namespace

IncludeCycle::IncludeCycle(std::vector<fs::path> chain)
    : std::runtime_error(describeChain(chain)), chain_(std::move(chain)) {}

std::vector<FileId> resolveIncludes(SourceManager& sources, const fs::path& entry,
                                    const std::vector<fs::path>& includeDirs) {
    Resolver r(sources, includeDirs);
    r.visit(entry);
    return r.take();
}

}  // namespace tonscan::frontend
