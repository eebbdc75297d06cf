#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support/fixtures.hpp"
#include "tonscan/frontend/includes.hpp"
#include "tonscan/frontend/lexer.hpp"
#include "tonscan/frontend/parser.hpp"
#include "tonscan/frontend/printer.hpp"

using namespace tonscan::frontend;
using tonscan::testing::fixtureFiles;
using tonscan::testing::readFile;

namespace {

std::vector<std::string> texts(const std::vector<Token>& toks) {
    std::vector<std::string> out;
    for (const auto& t : toks) {
        if (t.kind != TokenKind::EndOfFile) out.push_back(t.text);
    }
    return out;
}

SourceUnit parseText(const std::string& text) { return parse(tokenize(text, 0)); }

std::vector<std::filesystem::path> allFixtures() {
    auto files = fixtureFiles("listings");
    for (const char* dir : {"fixed", "corpus"}) {
        if (!std::filesystem::exists(tonscan::testing::fixture(dir))) continue;
        auto more = fixtureFiles(dir);
        files.insert(files.end(), more.begin(), more.end());
    }
    return files;
}

}  // namespace

TEST(Lexer, ModifyingCallTokens) {
    const auto toks = tokenize("int flags = cs~load_uint(4);", 0);
    EXPECT_EQ(texts(toks), (std::vector<std::string>{"int", "flags", "=", "cs", "~", "load_uint", "(", "4", ")", ";"}));
    EXPECT_EQ(toks[0].kind, TokenKind::Keyword);
    EXPECT_EQ(toks[1].kind, TokenKind::Identifier);
    EXPECT_EQ(toks[2].kind, TokenKind::Operator);
    EXPECT_EQ(toks[4].kind, TokenKind::Punct);
    EXPECT_EQ(toks[7].kind, TokenKind::IntLiteral);
}

TEST(Lexer, EmptyInput) {
    const auto toks = tokenize("", 0);
    ASSERT_EQ(toks.size(), 1u);
    EXPECT_EQ(toks[0].kind, TokenKind::EndOfFile);
}

TEST(Lexer, LooseIdentifiersAndComments) {
    const auto toks = tokenize("a.slice_empty?() ;; note\n{- outer {- inner -} -} op::withdraw ~/ b", 0);
    EXPECT_EQ(texts(toks), (std::vector<std::string>{"a", ".", "slice_empty?", "(", ")", "op::withdraw", "~/", "b"}));
    EXPECT_EQ(toks[5].span.startLine, 2u);
    EXPECT_EQ(toks[5].span.startCol, 25u);
}

TEST(Lexer, IllegalCharacter) {
    try {
        tokenize("int x = 1;\n  \x01", 0);
        FAIL() << "expected LexError";
    } catch (const LexError& e) {
        EXPECT_EQ(e.span().startLine, 2u);
        EXPECT_EQ(e.span().startCol, 3u);
    }
    EXPECT_THROW(tokenize("{- never closed", 0), LexError);
    EXPECT_THROW(tokenize("\"open", 0), LexError);
}

TEST(Lexer, CorpusRoundTrip) {
    for (const auto& path : allFixtures()) {
        const std::string src = readFile(path);
        const auto toks = tokenize(src, 0);
        std::string rebuilt;
        std::size_t at = 0;
        for (const auto& t : toks) {
            if (t.kind == TokenKind::EndOfFile) break;
            const std::string gap = src.substr(at, t.span.byteOffset - at);
            // gaps hold only whitespace and comments
            EXPECT_EQ(tokenize(gap, 0).size(), 1u) << path << " gap before " << t.text;
            rebuilt += gap;
            ASSERT_EQ(src.substr(t.span.byteOffset, t.span.byteLen), t.text) << path;
            rebuilt += t.text;
            at = t.span.byteEnd();
        }
        rebuilt += src.substr(at);
        EXPECT_EQ(rebuilt, src) << path;
    }
}

TEST(Parser, ListingFourShape) {
    const auto unit = parseText(readFile(tonscan::testing::fixture("listings/listing4.fc")));
    ASSERT_EQ(unit.globals.size(), 1u);
    EXPECT_EQ(unit.globals[0].name, "tokens");
    EXPECT_EQ(unit.globals[0].declaredType, TypeExpr::atom("int"));
    const FunctionDecl* fn = unit.findFunction("withdraw_jettons");
    ASSERT_NE(fn, nullptr);
    ASSERT_EQ(fn->body.size(), 3u);
    for (const auto& s : fn->body) {
        ASSERT_EQ(s.kind, StmtKind::Expr);
        ASSERT_EQ(s.expr->kind, ExprKind::Assign);
        EXPECT_EQ(s.expr->children[0].kind, ExprKind::VarDecl);
        EXPECT_EQ(s.expr->children[1].kind, ExprKind::TildeCall);
        EXPECT_EQ(s.expr->children[1].children[0].text, "s");
    }
    EXPECT_EQ(fn->params.size(), 2u);
    EXPECT_TRUE(fn->has(Modifier::Impure));
}

TEST(Parser, MinimalFunction) {
    const auto unit = parseText("() f() impure {}");
    ASSERT_EQ(unit.functions.size(), 1u);
    EXPECT_EQ(unit.functions[0].name, "f");
    EXPECT_EQ(unit.functions[0].modifiers, std::set<Modifier>{Modifier::Impure});
    EXPECT_TRUE(unit.functions[0].hasBody);
    EXPECT_TRUE(unit.functions[0].body.empty());
}

TEST(Parser, Precedence) {
    const auto unit = parseText("int f(a, b, c) { return a + b * c << 1 == x ? - a : b & c; }");
    const Expr& e = *unit.functions[0].body[0].expr;
    EXPECT_EQ(printExpr(e), "((((a + (b * c)) << 1) == x) ? (- a) : (b & c))");
}

TEST(Parser, ChainedMethodsAndTensors) {
    const auto unit = parseText(
        "() f() { var (wc, addr) = parse_std_addr(s); (int a, _) = (1, 2); "
        "x = begin_cell().store_uint(1, 2).end_cell(); cs~skip_bits(32); [a, b] = t; }");
    const auto& body = unit.functions[0].body;
    ASSERT_EQ(body.size(), 5u);
    EXPECT_EQ(printExpr(*body[0].expr), "(var wc, var addr) = parse_std_addr(s)");
    EXPECT_EQ(printExpr(*body[1].expr), "(int a, _) = (1, 2)");
    EXPECT_EQ(printExpr(*body[2].expr), "x = begin_cell().store_uint(1, 2).end_cell()");
    EXPECT_EQ(body[3].expr->kind, ExprKind::TildeCall);
    EXPECT_EQ(body[4].expr->children[0].kind, ExprKind::Tuple);
}

TEST(Parser, ControlFlowForms) {
    const auto unit = parseText(
        "() f(int n) { if (n) { } elseif (n > 1) { } else { } ifnot (n) { } "
        "while (n > 0) { n -= 1; } repeat (3) { } do { n += 1; } until (n > 5); return (); }");
    const auto& body = unit.functions[0].body;
    ASSERT_EQ(body.size(), 6u);
    EXPECT_EQ(body[0].kind, StmtKind::If);
    ASSERT_EQ(body[0].elseBody.size(), 1u);
    EXPECT_EQ(body[0].elseBody[0].kind, StmtKind::If);
    EXPECT_TRUE(body[0].elseBody[0].hasElse);
    EXPECT_TRUE(body[1].negated);
    EXPECT_EQ(body[2].kind, StmtKind::While);
    EXPECT_EQ(body[3].kind, StmtKind::Repeat);
    EXPECT_EQ(body[4].kind, StmtKind::DoUntil);
    EXPECT_EQ(body[5].kind, StmtKind::Return);
}

TEST(Parser, StatementRecovery) {
    const auto unit = parseText("() f() { int x = ; x = 1; }\n() g() { }");
    ASSERT_EQ(unit.functions.size(), 2u);
    const auto& body = unit.functions[0].body;
    ASSERT_EQ(body.size(), 2u);
    EXPECT_EQ(body[0].kind, StmtKind::Opaque);
    EXPECT_EQ(body[1].kind, StmtKind::Expr);
    EXPECT_EQ(unit.opaqueCount(), 1u);
    ASSERT_EQ(unit.diagnostics.size(), 1u);
    EXPECT_EQ(unit.diagnostics[0].span.startCol, 10u);
}

TEST(Parser, TopLevelErrors) {
    try {
        parseText("global int x\n() f() {}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.hint(), "';'");
        EXPECT_EQ(e.span().startLine, 2u);
    }
    EXPECT_THROW(parseText("() f(int a, int a) {}"), ParseError);
    EXPECT_THROW(parseText("() f() {"), ParseError);
}

TEST(Parser, DeclarationsAndAsm) {
    const auto unit = parseText(
        "#pragma version >=0.4.0;\n#include \"stdlib.fc\";\nglobal int a, cell b;\nconst int X = 5, Y = 0x10;\n"
        "int op::x() asm \"7 PUSHINT\";\nforall X -> X first(tuple t) asm \"FIRST\";\n"
        "(int, slice) pair(slice s) inline_ref method_id(85143) { return (1, s); }\n");
    ASSERT_EQ(unit.directives.size(), 2u);
    EXPECT_EQ(unit.directives[1].argument, "stdlib.fc");
    ASSERT_EQ(unit.globals.size(), 2u);
    EXPECT_EQ(unit.globals[1].name, "b");
    ASSERT_EQ(unit.constants.size(), 2u);
    EXPECT_EQ(unit.constants[1].value.intValue, 16);
    ASSERT_NE(unit.findFunction("op::x"), nullptr);
    EXPECT_EQ(asmConstant(*unit.findFunction("op::x")), 7);
    EXPECT_EQ(unit.findFunction("first")->forallVars, std::vector<std::string>{"X"});
    const FunctionDecl* pair = unit.findFunction("pair");
    EXPECT_EQ(pair->returnType.arity(), 2u);
    EXPECT_TRUE(pair->has(Modifier::InlineRef));
    EXPECT_TRUE(pair->has(Modifier::MethodId));
}

TEST(Parser, SymbolTablesInFileOrder) {
    const auto unit = parseText("global int z; () b() {} global slice a; () a2() {} int c() { return 1; }");
    std::vector<std::string> fns, globals;
    for (const auto& f : unit.functions) fns.push_back(f.name);
    for (const auto& g : unit.globals) globals.push_back(g.name);
    EXPECT_EQ(fns, (std::vector<std::string>{"b", "a2", "c"}));
    EXPECT_EQ(globals, (std::vector<std::string>{"z", "a"}));
}

TEST(Parser, CorpusHasNoOpaqueStatements) {
    for (const auto& path : allFixtures()) {
        const auto unit = parseText(readFile(path));
        EXPECT_EQ(unit.opaqueCount(), 0u) << path;
    }
}

TEST(Parser, SpansRelexToNodeTokens) {
    for (const auto& path : allFixtures()) {
        const std::string src = readFile(path);
        const auto toks = tokenize(src, 0);
        const auto unit = parse(toks);
        auto check = [&](const Expr& e) {
            std::vector<std::string> inside;
            for (const auto& t : toks) {
                if (t.kind != TokenKind::EndOfFile && t.span.byteOffset >= e.span.byteOffset &&
                    t.span.byteEnd() <= e.span.byteEnd()) {
                    inside.push_back(t.text);
                }
            }
            EXPECT_EQ(texts(tokenize(src.substr(e.span.byteOffset, e.span.byteLen), 0)), inside) << path;
        };
        for (const auto& fn : unit.functions) {
            walkStmts(fn.body, [&](const Stmt& s) {
                if (s.expr) walkExpr(*s.expr, check);
            });
        }
    }
}

TEST(Printer, ReparseIsStructurallyEqual) {
    for (const auto& path : allFixtures()) {
        const auto unit = parseText(readFile(path));
        const std::string printed = printAst(unit);
        const auto again = parseText(printed);
        EXPECT_TRUE(sameUnit(unit, again)) << path << "\n" << printed;
    }
}

class IncludeTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("tonscan_inc_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(dir_ / "lib");
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
    std::vector<std::string> names(const SourceManager& sm, const std::vector<FileId>& ids) {
        std::vector<std::string> out;
        for (auto id : ids) out.push_back(sm.file(id).path.filename().string());
        return out;
    }
    std::filesystem::path dir_;
};

TEST_F(IncludeTest, LinearChain) {
    write("a.fc", "#include \"b.fc\";\n");
    write("b.fc", "#include \"stdlib.fc\";\n");
    write("lib/stdlib.fc", "int x() asm \"NOP\";\n");
    SourceManager sm;
    EXPECT_EQ(names(sm, resolveIncludes(sm, dir_ / "a.fc", {dir_ / "lib"})),
              (std::vector<std::string>{"stdlib.fc", "b.fc", "a.fc"}));
}

TEST_F(IncludeTest, SelfCycle) {
    write("a.fc", "#include \"a.fc\";\n");
    SourceManager sm;
    try {
        resolveIncludes(sm, dir_ / "a.fc", {});
        FAIL() << "expected IncludeCycle";
    } catch (const IncludeCycle& e) {
        ASSERT_EQ(e.chain().size(), 2u);
        EXPECT_EQ(e.chain().front(), e.chain().back());
    }
}

TEST_F(IncludeTest, DiamondLoadsOnce) {
    write("a.fc", "#include \"b.fc\";\n#include \"c.fc\";\n");
    write("b.fc", "#include \"stdlib.fc\";\n");
    write("c.fc", "#include \"stdlib.fc\";\n");
    write("stdlib.fc", "\n");
    SourceManager sm;
    const auto order = names(sm, resolveIncludes(sm, dir_ / "a.fc", {}));
    EXPECT_EQ(order, (std::vector<std::string>{"stdlib.fc", "b.fc", "c.fc", "a.fc"}));
    EXPECT_EQ(sm.size(), 4u);
}

TEST_F(IncludeTest, MissingFileHasSpan) {
    write("a.fc", "\n#include \"nope.fc\";\n");
    SourceManager sm;
    try {
        resolveIncludes(sm, dir_ / "a.fc", {});
        FAIL() << "expected IncludeNotFound";
    } catch (const IncludeNotFound& e) {
        EXPECT_EQ(e.path(), "nope.fc");
        EXPECT_EQ(e.span().startLine, 2u);
    }
}
