// Copyright 2026 The Fockrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fockrec/parser.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace fockrec {

    namespace {

        enum class Tok {
            Ident,
            Number,   // integer or decimal, no sign
            LParen,
            RParen,
            LBrace,
            RBrace,
            LBracket,
            RBracket,
            BranchSep,  // []
            Choice,     // (+)
            Comma,
            Semi,
            Colon,
            Caret,
            Pipe,
            Gt,
            Arrow,      // ->
            DefArrow,   // <=
            Equals,
            Plus,
            Minus,
            End,
        };

        struct Token {
            Tok kind;
            std::string text;
            int line = 1;
            int col = 1;
        };

        class Lexer {
        public:
            explicit Lexer(const std::string& text) : m_text(text) {
                m_cur = scan();
                m_ahead = scan();
            }

            const Token& peek() const { return m_cur; }
            const Token& peekAhead() const { return m_ahead; }
            Token take() {
                Token t = m_cur;
                m_cur = m_ahead;
                m_ahead = scan();
                return t;
            }

        private:
            Token scan() {
                advance();
                return m_tok;
            }

            void advance() {
                skipWs();
                m_tok.line = m_line;
                m_tok.col = m_col;
                if (m_pos >= m_text.size()) {
                    m_tok = {Tok::End, "", m_line, m_col};
                    return;
                }
                char c = m_text[m_pos];
                if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                    size_t start = m_pos;
                    while (m_pos < m_text.size() &&
                           (std::isalnum(static_cast<unsigned char>(m_text[m_pos])) ||
                            m_text[m_pos] == '_'))
                        bump();
                    m_tok = {Tok::Ident, m_text.substr(start, m_pos - start), m_tok.line,
                             m_tok.col};
                    return;
                }
                if (std::isdigit(static_cast<unsigned char>(c))) {
                    size_t start = m_pos;
                    while (m_pos < m_text.size() &&
                           (std::isdigit(static_cast<unsigned char>(m_text[m_pos])) ||
                            m_text[m_pos] == '.'))
                        bump();
                    m_tok = {Tok::Number, m_text.substr(start, m_pos - start), m_tok.line,
                             m_tok.col};
                    return;
                }
                auto two = [&](char a, char b) {
                    return c == a && m_pos + 1 < m_text.size() && m_text[m_pos + 1] == b;
                };
                if (two('-', '>')) {
                    bump();
                    bump();
                    m_tok = {Tok::Arrow, "->", m_tok.line, m_tok.col};
                    return;
                }
                if (two('<', '=')) {
                    bump();
                    bump();
                    m_tok = {Tok::DefArrow, "<=", m_tok.line, m_tok.col};
                    return;
                }
                if (two('[', ']')) {
                    bump();
                    bump();
                    m_tok = {Tok::BranchSep, "[]", m_tok.line, m_tok.col};
                    return;
                }
                if (c == '(' && m_pos + 2 < m_text.size() && m_text[m_pos + 1] == '+' &&
                    m_text[m_pos + 2] == ')') {
                    bump();
                    bump();
                    bump();
                    m_tok = {Tok::Choice, "(+)", m_tok.line, m_tok.col};
                    return;
                }
                Tok k;
                switch (c) {
                    case '(': k = Tok::LParen; break;
                    case ')': k = Tok::RParen; break;
                    case '{': k = Tok::LBrace; break;
                    case '}': k = Tok::RBrace; break;
                    case '[': k = Tok::LBracket; break;
                    case ']': k = Tok::RBracket; break;
                    case ',': k = Tok::Comma; break;
                    case ';': k = Tok::Semi; break;
                    case ':': k = Tok::Colon; break;
                    case '^': k = Tok::Caret; break;
                    case '|': k = Tok::Pipe; break;
                    case '>': k = Tok::Gt; break;
                    case '=': k = Tok::Equals; break;
                    case '+': k = Tok::Plus; break;
                    case '-': k = Tok::Minus; break;
                    default:
                        throw ParseError(std::string("unexpected character '") + c + "'", m_line,
                                         m_col);
                }
                bump();
                m_tok = {k, std::string(1, c), m_tok.line, m_tok.col};
            }

            void skipWs() {
                while (m_pos < m_text.size()) {
                    char c = m_text[m_pos];
                    if (c == '/' && m_pos + 1 < m_text.size() && m_text[m_pos + 1] == '/') {
                        while (m_pos < m_text.size() && m_text[m_pos] != '\n')
                            bump();
                    } else if (std::isspace(static_cast<unsigned char>(c))) {
                        bump();
                    } else {
                        break;
                    }
                }
            }

            void bump() {
                if (m_text[m_pos] == '\n') {
                    ++m_line;
                    m_col = 1;
                } else {
                    ++m_col;
                }
                ++m_pos;
            }

            const std::string& m_text;
            size_t m_pos = 0;
            int m_line = 1;
            int m_col = 1;
            Token m_tok;   // scratch slot written by advance()
            Token m_cur;
            Token m_ahead;
        };

        class Parser {
        public:
            explicit Parser(const SourceFile& src) : m_lex(src.text) {}

            ParsedProgram run() {
                auto spaces = std::make_shared<Spaces>();
                m_spaces = spaces.get();
                bool haveMain = false;
                while (m_lex.peek().kind != Tok::End) {
                    const Token& t = m_lex.peek();
                    if (t.kind != Tok::Ident)
                        fail("expected a declaration", t);
                    if (t.text == "coin")
                        parseCoinDecl();
                    else if (t.text == "system")
                        parseSystemDecl();
                    else if (t.text == "gate")
                        parseGateDecl();
                    else if (t.text == "proc")
                        parseProcDecl();
                    else if (t.text == "main") {
                        parseMainDecl();
                        haveMain = true;
                        break;
                    } else
                        fail("expected 'coin', 'system', 'gate', 'proc' or 'main'", t);
                }
                if (!haveMain) {
                    const Token& t = m_lex.peek();
                    fail("missing main statement", t);
                }
                if (m_lex.peek().kind != Tok::End)
                    fail("trailing input after main statement", m_lex.peek());
                ParsedProgram out;
                out.declaration = std::move(m_decl);
                out.gates = std::move(m_gates);
                out.spaces = spaces;
                return out;
            }

        private:
            [[noreturn]] void fail(const std::string& msg, const Token& t) {
                throw ParseError(msg + (t.text.empty() ? "" : " (got '" + t.text + "')"), t.line,
                                 t.col);
            }

            Token expect(Tok k, const std::string& what) {
                if (m_lex.peek().kind != k)
                    fail("expected " + what, m_lex.peek());
                return m_lex.take();
            }

            std::string expectIdent(const std::string& what) {
                return expect(Tok::Ident, what).text;
            }

            bool acceptKeyword(const std::string& kw) {
                if (m_lex.peek().kind == Tok::Ident && m_lex.peek().text == kw) {
                    m_lex.take();
                    return true;
                }
                return false;
            }

            void expectKeyword(const std::string& kw) {
                if (!acceptKeyword(kw))
                    fail("expected '" + kw + "'", m_lex.peek());
            }

            int parseInt() {
                bool neg = false;
                if (m_lex.peek().kind == Tok::Minus) {
                    m_lex.take();
                    neg = true;
                }
                Token t = expect(Tok::Number, "an integer");
                if (t.text.find('.') != std::string::npos)
                    fail("expected an integer, not a decimal", t);
                int v = std::stoi(t.text);
                return neg ? -v : v;
            }

            // A basis label: an identifier or a (possibly negative) integer.
            std::string parseLabel() {
                if (m_lex.peek().kind == Tok::Minus) {
                    m_lex.take();
                    Token t = expect(Tok::Number, "a label");
                    return "-" + t.text;
                }
                if (m_lex.peek().kind == Tok::Number)
                    return m_lex.take().text;
                return expectIdent("a label");
            }

            void parseCoinDecl() {
                Token kw = m_lex.take();  // coin
                std::string name = expectIdent("a coin name");
                if (m_spaces->find(name))
                    fail("duplicate declaration of space '" + name + "'", kw);
                expect(Tok::Colon, "':'");
                expectKeyword("basis");
                expect(Tok::LBrace, "'{'");
                std::vector<std::string> labels;
                labels.push_back(parseLabel());
                while (m_lex.peek().kind == Tok::Comma) {
                    m_lex.take();
                    labels.push_back(parseLabel());
                }
                expect(Tok::RBrace, "'}'");
                expect(Tok::Semi, "';'");
                m_spaces->coins.push_back(SpaceSpec::coin(name, labels));
            }

            void parseSystemDecl() {
                Token kw = m_lex.take();  // system
                std::string name = expectIdent("a system name");
                if (m_spaces->find(name))
                    fail("duplicate declaration of space '" + name + "'", kw);
                expect(Tok::Colon, "':'");
                if (acceptKeyword("ring")) {
                    int w = parseInt();
                    if (w < 1)
                        fail("ring half-width must be positive", kw);
                    m_spaces->principals.push_back(SpaceSpec::ring(name, w));
                } else if (acceptKeyword("dim")) {
                    int d = parseInt();
                    if (d < 1)
                        fail("dimension must be positive", kw);
                    m_spaces->principals.push_back(SpaceSpec::principal(name, d));
                } else {
                    fail("expected 'ring' or 'dim'", m_lex.peek());
                }
                expect(Tok::Semi, "';'");
            }

            bool peekImaginaryUnit() {
                return m_lex.peek().kind == Tok::Ident && m_lex.peek().text == "i";
            }

            // Accepted forms: 'a', 'a+bi', 'a-bi', 'bi', 'i', '-i', 'a+i', 'a-i'.
            Complex parseComplex() {
                double sign = 1.0;
                if (m_lex.peek().kind == Tok::Minus) {
                    m_lex.take();
                    sign = -1.0;
                } else if (m_lex.peek().kind == Tok::Plus) {
                    m_lex.take();
                }
                if (peekImaginaryUnit()) {
                    m_lex.take();
                    return Complex(0, sign);
                }
                Token t = expect(Tok::Number, "a number");
                double a = sign * std::stod(t.text);
                if (peekImaginaryUnit()) {
                    m_lex.take();
                    return Complex(0, a);
                }
                if (m_lex.peek().kind == Tok::Plus || m_lex.peek().kind == Tok::Minus) {
                    bool neg = m_lex.take().kind == Tok::Minus;
                    double b;
                    if (peekImaginaryUnit()) {
                        m_lex.take();
                        b = 1.0;
                    } else {
                        Token bt = expect(Tok::Number, "a number");
                        b = std::stod(bt.text);
                        if (!peekImaginaryUnit())
                            fail("expected 'i' after imaginary part", m_lex.peek());
                        m_lex.take();
                    }
                    return Complex(a, neg ? -b : b);
                }
                return Complex(a, 0);
            }

            void parseGateDecl() {
                Token kw = m_lex.take();  // gate
                std::string name = expectIdent("a gate name");
                if (m_gates.find(name))
                    fail("duplicate declaration of gate '" + name + "'", kw);
                expectKeyword("on");
                expect(Tok::LParen, "'('");
                std::vector<std::string> spaceNames;
                spaceNames.push_back(expectIdent("a space name"));
                while (m_lex.peek().kind == Tok::Comma) {
                    m_lex.take();
                    spaceNames.push_back(expectIdent("a space name"));
                }
                expect(Tok::RParen, "')'");
                expect(Tok::Equals, "'='");

                long dim = 1;
                for (const auto& sn : spaceNames) {
                    const SpaceSpec* s = m_spaces->find(sn);
                    if (!s)
                        fail("unknown space '" + sn + "' in gate signature", kw);
                    dim *= s->dimension();
                }

                DenseMatrix m;
                if (acceptKeyword("hadamard")) {
                    m = hadamardMatrix();
                } else if (acceptKeyword("fourier")) {
                    int n = parseInt();
                    if (n < 1)
                        fail("fourier size must be positive", kw);
                    m = fourierMatrix(n);
                } else if (acceptKeyword("shift")) {
                    int off = parseInt();
                    m = shiftMatrix(static_cast<int>(dim), off);
                } else if (acceptKeyword("identity")) {
                    m = identityMatrix(static_cast<int>(dim));
                } else if (acceptKeyword("matrix")) {
                    expect(Tok::LBracket, "'['");
                    std::vector<std::vector<Complex>> rows;
                    rows.emplace_back();
                    rows.back().push_back(parseComplex());
                    while (true) {
                        if (m_lex.peek().kind == Tok::Comma) {
                            m_lex.take();
                            rows.back().push_back(parseComplex());
                        } else if (m_lex.peek().kind == Tok::Semi) {
                            m_lex.take();
                            rows.emplace_back();
                            rows.back().push_back(parseComplex());
                        } else {
                            break;
                        }
                    }
                    expect(Tok::RBracket, "']'");
                    size_t cols = rows[0].size();
                    for (const auto& r : rows)
                        if (r.size() != cols)
                            fail("ragged matrix literal", kw);
                    m.resize(static_cast<long>(rows.size()), static_cast<long>(cols));
                    for (size_t r = 0; r < rows.size(); ++r)
                        for (size_t c = 0; c < cols; ++c)
                            m(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
                } else {
                    fail("expected a gate expression", m_lex.peek());
                }
                expect(Tok::Semi, "';'");

                GateDef def;
                def.name = name;
                def.spaceNames = spaceNames;
                def.matrix = m;
                def.unitary = isUnitary(m);
                m_gates.add(std::move(def));
            }

            void parseProcDecl() {
                m_lex.take();  // proc
                std::string name = expectIdent("a procedure name");
                for (const auto& [n, b] : m_decl.equations)
                    if (n == name)
                        fail("duplicate declaration of procedure '" + name + "'", m_lex.peek());
                expect(Tok::DefArrow, "'<='");
                ProgPtr body = parseProg();
                expect(Tok::Semi, "';'");
                m_decl.equations.emplace_back(name, body);
            }

            void parseMainDecl() {
                m_lex.take();  // main
                expect(Tok::Equals, "'='");
                m_decl.main = parseProg();
                expect(Tok::Semi, "';'");
            }

            // prog := seq ( "(+)" "[" gate "[" coin "]" "]" seq )*
            ProgPtr parseProg() {
                ProgPtr lhs = parseSeq();
                while (m_lex.peek().kind == Tok::Choice) {
                    Token t = m_lex.take();
                    expect(Tok::LBracket, "'['");
                    std::string gateName = expectIdent("a gate name");
                    expect(Tok::LBracket, "'['");
                    std::string coinName = expectIdent("a coin name");
                    expect(Tok::RBracket, "']'");
                    expect(Tok::RBracket, "']'");
                    ProgPtr rhs = parseSeq();
                    const SpaceSpec* coin = m_spaces->findCoin(coinName);
                    if (!coin)
                        fail("unknown coin '" + coinName + "' in choice", t);
                    if (coin->dimension() < 2)
                        fail("choice coin must have at least two basis states", t);
                    ProgPtr tossing = makeUnitary(gateName, {CoinRef{coinName, 0}}, {});
                    std::vector<QifBranch> branches;
                    branches.push_back({coin->basisLabels[0], lhs});
                    branches.push_back({coin->basisLabels[1], rhs});
                    lhs = desugarChoice(tossing, CoinRef{coinName, 0}, std::move(branches));
                }
                return lhs;
            }

            // seq := pow ( ";" seq )?   (right-associative)
            //
            // ';' doubles as the declaration terminator, so it only continues
            // a sequence when a program can start after it.
            bool programFollows(const Token& t) const {
                if (t.kind == Tok::LParen)
                    return true;
                if (t.kind != Tok::Ident)
                    return false;
                static const char* reserved[] = {"proc", "main", "gate",
                                                 "coin", "system", "fiq"};
                for (const char* r : reserved)
                    if (t.text == r)
                        return false;
                return true;
            }

            ProgPtr parseSeq() {
                ProgPtr lhs = parsePow();
                if (m_lex.peek().kind == Tok::Semi && programFollows(m_lex.peekAhead())) {
                    m_lex.take();
                    return makeSeq(lhs, parseSeq());
                }
                return lhs;
            }

            ProgPtr parsePow() {
                ProgPtr base = parseAtom();
                while (m_lex.peek().kind == Tok::Caret) {
                    Token t = m_lex.take();
                    int n = parseInt();
                    if (n < 1)
                        fail("power must be at least 1", t);
                    base = seqPower(base, n);
                }
                return base;
            }

            ProgPtr parseAtom() {
                const Token& t = m_lex.peek();
                if (t.kind == Tok::LParen) {
                    m_lex.take();
                    ProgPtr p = parseProg();
                    expect(Tok::RParen, "')'");
                    return p;
                }
                if (t.kind != Tok::Ident)
                    fail("expected a program", t);
                if (t.text == "abort") {
                    m_lex.take();
                    return makeAbort();
                }
                if (t.text == "skip") {
                    m_lex.take();
                    return makeSkip();
                }
                if (t.text == "qif")
                    return parseQif();
                // Identifier: procedure call or gate application.
                Token id = m_lex.take();
                if (m_lex.peek().kind != Tok::LBracket)
                    return makeProcCall(id.text);
                m_lex.take();  // [
                std::vector<std::string> args;
                args.push_back(expectIdent("a variable name"));
                while (m_lex.peek().kind == Tok::Comma) {
                    m_lex.take();
                    args.push_back(expectIdent("a variable name"));
                }
                expect(Tok::RBracket, "']'");
                std::vector<CoinRef> coins;
                std::vector<std::string> systems;
                for (const auto& a : args) {
                    if (m_spaces->findCoin(a))
                        coins.push_back(CoinRef{a, 0});
                    else
                        systems.push_back(a);  // unknown names surface in validation
                }
                auto u = makeUnitary(id.text, std::move(coins), std::move(systems));
                auto mut = std::const_pointer_cast<Prog>(u);
                mut->line = id.line;
                mut->col = id.col;
                return u;
            }

            ProgPtr parseQif() {
                m_lex.take();  // qif
                expect(Tok::LBracket, "'['");
                std::string coinName = expectIdent("a coin name");
                expect(Tok::RBracket, "']'");
                std::vector<QifBranch> branches;
                branches.push_back(parseBranch());
                while (m_lex.peek().kind == Tok::BranchSep) {
                    m_lex.take();
                    branches.push_back(parseBranch());
                }
                expectKeyword("fiq");
                return makeQif(CoinRef{coinName, 0}, std::move(branches));
            }

            QifBranch parseBranch() {
                expect(Tok::Pipe, "'|'");
                std::string label = parseLabel();
                expect(Tok::Gt, "'>'");
                expect(Tok::Arrow, "'->'");
                ProgPtr body = parseProg();
                return {label, body};
            }

            Lexer m_lex;
            Spaces* m_spaces = nullptr;
            GateLibrary m_gates;
            Declaration m_decl;
        };

        std::string formatComplex(const Complex& z) {
            std::ostringstream oss;
            oss.precision(17);
            oss << z.real();
            if (z.imag() >= 0)
                oss << "+" << z.imag() << "i";
            else
                oss << "-" << -z.imag() << "i";
            return oss.str();
        }

    }  // namespace

    ParsedProgram parse(const SourceFile& src) {
        Parser p(src);
        return p.run();
    }

    std::string prettyPrint(const ParsedProgram& p) {
        std::ostringstream oss;
        for (const auto& c : p.spaces->coins) {
            oss << "coin " << c.name << " : basis {";
            for (size_t i = 0; i < c.basisLabels.size(); ++i)
                oss << (i ? ", " : "") << c.basisLabels[i];
            oss << "};\n";
        }
        for (const auto& s : p.spaces->principals) {
            // Rings are recognised by their symmetric label range.
            int dim = s.dimension();
            bool ring = dim % 2 == 1 && s.basisLabels.front() == std::to_string(-(dim / 2));
            if (ring)
                oss << "system " << s.name << " : ring " << dim / 2 << ";\n";
            else
                oss << "system " << s.name << " : dim " << dim << ";\n";
        }
        for (const auto& [name, g] : p.gates.entries()) {
            oss << "gate " << name << " on (";
            for (size_t i = 0; i < g.spaceNames.size(); ++i)
                oss << (i ? ", " : "") << g.spaceNames[i];
            oss << ") = matrix [";
            for (long r = 0; r < g.matrix.rows(); ++r) {
                if (r)
                    oss << "; ";
                for (long c = 0; c < g.matrix.cols(); ++c)
                    oss << (c ? ", " : "") << formatComplex(g.matrix(r, c));
            }
            oss << "];\n";
        }
        for (const auto& [name, body] : p.declaration.equations)
            oss << "proc " << name << " <= " << printProg(body) << ";\n";
        oss << "main = " << printProg(p.declaration.main) << ";\n";
        return oss.str();
    }

}  // namespace fockrec
