#include "support/program_fixture.hpp"

#include "tonscan/frontend/lexer.hpp"
#include "tonscan/frontend/parser.hpp"

namespace tonscan::testing {

Built buildFromText(const std::string& text, const analysis::BuiltinCatalog& catalog) {
    Built b;
    b.unit = std::make_unique<frontend::SourceUnit>(frontend::parse(frontend::tokenize(text, 0)));
    b.program = std::make_unique<analysis::Program>(analysis::buildProgram(*b.unit, catalog));
    return b;
}

}  // namespace tonscan::testing
