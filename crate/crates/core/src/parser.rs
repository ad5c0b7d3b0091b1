//! Concrete syntax.
//!
//! ```text
//! φ ::= atom | true | false | ( φ )
//!     | ! φ | X φ | X[k] φ | S φ | F φ | F[t] φ | G φ | G[t] φ
//!     | AG φ | AG[t] φ | L[t] φ | W[t] φ | O[j] φ
//!     | φ U φ | φ U[t] φ | φ AU φ | φ AU[t] φ
//!     | φ & φ | φ && φ | φ | φ | φ || φ | φ -> φ
//! ```
//!
//! Precedence, tightest first: prefix operators, the until family (left
//! associative), `&`/`&&`, `|`/`||`, then `->` (right associative).
//! `X[k] φ` is sugar for `k` nested `X`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Bound, Formula};

/// Largest bound accepted in `[...]`.
pub const MAX_BOUND: u64 = 1_000_000;
/// Largest `k` accepted in the `X[k]` shorthand.
pub const MAX_NEXT_SUGAR: u64 = 1_000;
/// Largest syntactic nesting depth.
pub const MAX_DEPTH: usize = 1_000;

/// Byte range `[start, end)` in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at {}..{}: {}",
            self.span.start, self.span.end, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl core::error::Error for SyntaxError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kw {
    X,
    S,
    F,
    G,
    AG,
    L,
    W,
    O,
    U,
    AU,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Kw(Kw),
    Number(u64),
    Bang,
    Amp,
    AmpAmp,
    Pipe,
    PipePipe,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("atom `{s}`"),
            Tok::Number(n) => alloc::format!("number {n}"),
            Tok::Eof => "end of input".to_string(),
            other => alloc::format!("`{}`", token_text(other)),
        }
    }
}

fn token_text(t: &Tok) -> &'static str {
    match t {
        Tok::True => "true",
        Tok::False => "false",
        Tok::Kw(k) => match k {
            Kw::X => "X",
            Kw::S => "S",
            Kw::F => "F",
            Kw::G => "G",
            Kw::AG => "AG",
            Kw::L => "L",
            Kw::W => "W",
            Kw::O => "O",
            Kw::U => "U",
            Kw::AU => "AU",
        },
        Tok::Bang => "!",
        Tok::Amp => "&",
        Tok::AmpAmp => "&&",
        Tok::Pipe => "|",
        Tok::PipePipe => "||",
        Tok::Arrow => "->",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBracket => "[",
        Tok::RBracket => "]",
        Tok::Ident(_) | Tok::Number(_) | Tok::Eof => "",
    }
}

const OPERAND_START: &[&str] = &[
    "atom", "true", "false", "(", "!", "X", "S", "F", "G", "AG", "L[t]", "W[t]", "O[j]",
];
const AFTER_OPERAND: &[&str] = &["U", "AU", "&", "&&", "|", "||", "->", ")", "end of input"];

fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'!' => {
                i += 1;
                Tok::Bang
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'[' => {
                i += 1;
                Tok::LBracket
            }
            b']' => {
                i += 1;
                Tok::RBracket
            }
            b'&' if bytes.get(i + 1) == Some(&b'&') => {
                i += 2;
                Tok::AmpAmp
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'|' if bytes.get(i + 1) == Some(&b'|') => {
                i += 2;
                Tok::PipePipe
            }
            b'|' => {
                i += 1;
                Tok::Pipe
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i].parse::<u64>().map_err(|_| SyntaxError {
                    span: SourceSpan::new(start, i),
                    message: "number too large".into(),
                    expected: Vec::new(),
                })?;
                Tok::Number(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &src[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Kw(Kw::X),
                    "S" => Tok::Kw(Kw::S),
                    "F" => Tok::Kw(Kw::F),
                    "G" => Tok::Kw(Kw::G),
                    "AG" => Tok::Kw(Kw::AG),
                    "L" => Tok::Kw(Kw::L),
                    "W" => Tok::Kw(Kw::W),
                    "O" => Tok::Kw(Kw::O),
                    "U" => Tok::Kw(Kw::U),
                    "AU" => Tok::Kw(Kw::AU),
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                // report the whole (possibly multi-byte) character
                let ch_len = src[start..].chars().next().map_or(1, char::len_utf8);
                return Err(SyntaxError {
                    span: SourceSpan::new(start, start + ch_len),
                    message: alloc::format!(
                        "unexpected character `{}`",
                        &src[start..start + ch_len]
                    ),
                    expected: Vec::new(),
                });
            }
        };
        out.push((tok, SourceSpan::new(start, i)));
    }
    out.push((Tok::Eof, SourceSpan::new(src.len(), src.len())));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> SyntaxError {
        SyntaxError {
            span: self.span(),
            message: alloc::format!("unexpected {}", self.peek().describe()),
            expected: expected.to_vec(),
        }
    }

    fn implication(&mut self, depth: usize) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction(depth)?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication(depth + 1)?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self, depth: usize) -> Result<Formula, SyntaxError> {
        let mut lhs = self.conjunction(depth)?;
        loop {
            let weak = match self.peek() {
                Tok::Pipe => false,
                Tok::PipePipe => true,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.conjunction(depth)?;
            lhs = if weak {
                Formula::weak_or(lhs, rhs)
            } else {
                Formula::or(lhs, rhs)
            };
        }
    }

    fn conjunction(&mut self, depth: usize) -> Result<Formula, SyntaxError> {
        let mut lhs = self.until(depth)?;
        loop {
            let weak = match self.peek() {
                Tok::Amp => false,
                Tok::AmpAmp => true,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.until(depth)?;
            lhs = if weak {
                Formula::weak_and(lhs, rhs)
            } else {
                Formula::and(lhs, rhs)
            };
        }
    }

    fn until(&mut self, depth: usize) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary(depth)?;
        loop {
            let almost = match self.peek() {
                Tok::Kw(Kw::U) => false,
                Tok::Kw(Kw::AU) => true,
                _ => return Ok(lhs),
            };
            self.bump();
            let bound = self.optional_bound(MAX_BOUND)?;
            let rhs = self.unary(depth)?;
            lhs = match (almost, bound) {
                (false, None) => Formula::until(lhs, rhs),
                (false, Some(t)) => Formula::until_b(t, lhs, rhs),
                (true, None) => Formula::almost_until(lhs, rhs),
                (true, Some(t)) => Formula::almost_until_b(t, lhs, rhs),
            };
        }
    }

    fn optional_bound(&mut self, max: u64) -> Result<Option<Bound>, SyntaxError> {
        if *self.peek() != Tok::LBracket {
            return Ok(None);
        }
        self.bump();
        let (tok, span) = self.bump();
        let n = match tok {
            Tok::Number(n) => n,
            _ => {
                self.pos -= 1;
                return Err(self.error(&["number"]));
            }
        };
        if n > max {
            return Err(SyntaxError {
                span,
                message: alloc::format!("bound {n} exceeds the limit {max}"),
                expected: Vec::new(),
            });
        }
        if *self.peek() != Tok::RBracket {
            return Err(self.error(&["]"]));
        }
        self.bump();
        Ok(Some(n as Bound))
    }

    fn required_bound(&mut self, what: &'static str) -> Result<Bound, SyntaxError> {
        match self.optional_bound(MAX_BOUND)? {
            Some(t) => Ok(t),
            None => Err(self.error(&[what])),
        }
    }

    fn unary(&mut self, depth: usize) -> Result<Formula, SyntaxError> {
        if depth > MAX_DEPTH {
            return Err(SyntaxError {
                span: self.span(),
                message: "formula nested too deeply".into(),
                expected: Vec::new(),
            });
        }
        let d = depth + 1;
        let kw = match self.peek() {
            Tok::Bang => {
                self.bump();
                return Ok(Formula::not(self.unary(d)?));
            }
            Tok::Kw(k) => *k,
            _ => return self.primary(depth),
        };
        if matches!(kw, Kw::U | Kw::AU) {
            return Err(self.error(OPERAND_START));
        }
        self.bump();
        let f = match kw {
            Kw::X => {
                let k = self.optional_bound(MAX_NEXT_SUGAR)?.unwrap_or(1);
                Formula::next_n(k as usize, self.unary(d)?)
            }
            Kw::S => Formula::soon(self.unary(d)?),
            Kw::F => match self.optional_bound(MAX_BOUND)? {
                Some(t) => Formula::eventually_b(t, self.unary(d)?),
                None => Formula::eventually(self.unary(d)?),
            },
            Kw::G => match self.optional_bound(MAX_BOUND)? {
                Some(t) => Formula::always_b(t, self.unary(d)?),
                None => Formula::always(self.unary(d)?),
            },
            Kw::AG => match self.optional_bound(MAX_BOUND)? {
                Some(t) => Formula::almost_always_b(t, self.unary(d)?),
                None => Formula::almost_always(self.unary(d)?),
            },
            Kw::L => {
                let t = self.required_bound("[")?;
                Formula::lasts(t, self.unary(d)?)
            }
            Kw::W => {
                let t = self.required_bound("[")?;
                Formula::within(t, self.unary(d)?)
            }
            Kw::O => {
                let j = self.required_bound("[")?;
                Formula::scale(j, self.unary(d)?)
            }
            Kw::U | Kw::AU => unreachable!(),
        };
        Ok(f)
    }

    fn primary(&mut self, depth: usize) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication(depth + 1)?;
                if *self.peek() != Tok::RParen {
                    let mut expected = AFTER_OPERAND.to_vec();
                    expected.retain(|e| *e != "end of input");
                    return Err(self.error(&expected));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(OPERAND_START)),
        }
    }
}

/// Parses FTL text into a [`Formula`].
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.implication(0)?;
    if *p.peek() != Tok::Eof {
        let mut expected = AFTER_OPERAND.to_vec();
        expected.retain(|e| *e != ")");
        return Err(p.error(&expected));
    }
    Ok(f)
}

const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNTIL: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_ATOM: u8 = 6;

fn prec(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        Atom(_) | Top | Bot => PREC_ATOM,
        Implies(..) => PREC_IMPLIES,
        Or(..) | WeakOr(..) => PREC_OR,
        And(..) | WeakAnd(..) => PREC_AND,
        Until(..) | UntilB(..) | AlmostUntil(..) | AlmostUntilB(..) => PREC_UNTIL,
        _ => PREC_UNARY,
    }
}

/// Canonical text with minimal parentheses; `parse(&format(f)) == f`.
pub fn format(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    use Formula::*;
    match f {
        Atom(a) => out.push_str(a),
        Top => out.push_str("true"),
        Bot => out.push_str("false"),
        Next(_) => {
            let mut k = 0usize;
            let mut cur = f;
            while let Next(inner) = cur {
                k += 1;
                cur = inner;
            }
            let mut prefix = String::new();
            let mut rest = k;
            while rest > 0 {
                let chunk = rest.min(MAX_NEXT_SUGAR as usize);
                if !prefix.is_empty() {
                    prefix.push(' ');
                }
                if chunk == 1 {
                    prefix.push('X');
                } else {
                    prefix.push_str(&alloc::format!("X[{chunk}]"));
                }
                rest -= chunk;
            }
            write_prefixed(&prefix, cur, out);
        }
        Not(a) => write_prefixed("!", a, out),
        Soon(a) => write_prefixed("S", a, out),
        Eventually(a) => write_prefixed("F", a, out),
        EventuallyB(t, a) => write_prefixed(&alloc::format!("F[{t}]"), a, out),
        Always(a) => write_prefixed("G", a, out),
        AlwaysB(t, a) => write_prefixed(&alloc::format!("G[{t}]"), a, out),
        AlmostAlways(a) => write_prefixed("AG", a, out),
        AlmostAlwaysB(t, a) => write_prefixed(&alloc::format!("AG[{t}]"), a, out),
        Lasts(t, a) => write_prefixed(&alloc::format!("L[{t}]"), a, out),
        Within(t, a) => write_prefixed(&alloc::format!("W[{t}]"), a, out),
        Scale(j, a) => write_prefixed(&alloc::format!("O[{j}]"), a, out),
        Implies(a, b) => write_binary(f, a, " -> ", b, true, out),
        Or(a, b) => write_binary(f, a, " | ", b, false, out),
        WeakOr(a, b) => write_binary(f, a, " || ", b, false, out),
        And(a, b) => write_binary(f, a, " & ", b, false, out),
        WeakAnd(a, b) => write_binary(f, a, " && ", b, false, out),
        Until(a, b) => write_binary(f, a, " U ", b, false, out),
        AlmostUntil(a, b) => write_binary(f, a, " AU ", b, false, out),
        UntilB(t, a, b) => write_binary(f, a, &alloc::format!(" U[{t}] "), b, false, out),
        AlmostUntilB(t, a, b) => {
            write_binary(f, a, &alloc::format!(" AU[{t}] "), b, false, out)
        }
    }
}

fn write_prefixed(prefix: &str, operand: &Formula, out: &mut String) {
    out.push_str(prefix);
    let mut inner = String::new();
    write_operand(operand, prec(operand) < PREC_UNARY, &mut inner);
    if prefix != "!" && !inner.starts_with(['!', '(']) {
        out.push(' ');
    }
    out.push_str(&inner);
}

fn write_binary(
    node: &Formula,
    a: &Formula,
    op: &str,
    b: &Formula,
    right_assoc: bool,
    out: &mut String,
) {
    let p = prec(node);
    let (left_parens, right_parens) = if right_assoc {
        (prec(a) <= p, prec(b) < p)
    } else {
        (prec(a) < p, prec(b) <= p)
    };
    write_operand(a, left_parens, out);
    out.push_str(op);
    write_operand(b, right_parens, out);
}

fn write_operand(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    fn a(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn smart_grid_formulas() {
        assert_eq!(p("AG[1440] a"), Formula::almost_always_b(1440, a("a")));
        assert_eq!(
            p("d -> W[1] c"),
            Formula::implies(a("d"), Formula::within(1, a("c")))
        );
        assert_eq!(
            p("s U[1440] p"),
            Formula::until_b(1440, a("s"), a("p"))
        );
        assert_eq!(
            p("s AU[1440] p"),
            Formula::almost_until_b(1440, a("s"), a("p"))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            p("p U q & r"),
            Formula::and(Formula::until(a("p"), a("q")), a("r"))
        );
        assert_eq!(
            p("p & q | r -> s"),
            Formula::implies(
                Formula::or(Formula::and(a("p"), a("q")), a("r")),
                a("s")
            )
        );
        assert_eq!(
            p("p -> q -> r"),
            Formula::implies(a("p"), Formula::implies(a("q"), a("r")))
        );
        assert_eq!(
            p("p U q U r"),
            Formula::until(Formula::until(a("p"), a("q")), a("r"))
        );
        assert_eq!(
            p("!p U X q"),
            Formula::until(Formula::not(a("p")), Formula::next(a("q")))
        );
        assert_eq!(
            p("p && q || r"),
            Formula::weak_or(Formula::weak_and(a("p"), a("q")), a("r"))
        );
        assert_eq!(p("X[3] p"), Formula::next_n(3, a("p")));
        assert_eq!(p("X[0] p"), a("p"));
        assert_eq!(p("O[2] p"), Formula::scale(2, a("p")));
        assert_eq!(p("F!p"), Formula::eventually(Formula::not(a("p"))));
        assert_eq!(p("Fp"), a("Fp"));
        assert_eq!(p("(true)"), Formula::Top);
    }

    #[test]
    fn format_examples() {
        assert_eq!(format(&Formula::almost_always_b(5, a("p"))), "AG[5] p");
        assert_eq!(
            format(&Formula::implies(a("p"), Formula::implies(a("q"), a("r")))),
            "p -> q -> r"
        );
        assert_eq!(
            format(&Formula::until(Formula::and(a("p"), a("q")), a("r"))),
            "(p & q) U r"
        );
        assert_eq!(
            format(&Formula::implies(Formula::implies(a("p"), a("q")), a("r"))),
            "(p -> q) -> r"
        );
        assert_eq!(
            format(&Formula::not(Formula::eventually(Formula::not(a("p"))))),
            "!F!p"
        );
        assert_eq!(
            format(&Formula::or(
                Formula::eventually_b(2, a("p")),
                Formula::next_n(3, Formula::soon(a("p")))
            )),
            "F[2] p | X[3] S p"
        );
        assert_eq!(
            format(&Formula::eventually(Formula::and(a("p"), a("q")))),
            "F(p & q)"
        );
        assert_eq!(
            format(&Formula::and(a("p"), Formula::weak_and(a("q"), a("r")))),
            "p & (q && r)"
        );
    }

    #[test]
    fn long_next_chains_round_trip() {
        let f = Formula::next_n(2500, a("p"));
        let text = format(&f);
        assert_eq!(text, "X[1000] X[1000] X[500] p");
        assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn errors_carry_spans() {
        let e = parse("p &").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 3, end: 3 });
        assert!(e.expected.contains(&"atom"));

        let e = parse("F[2000000] p").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 2, end: 9 });

        let e = parse("p q").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 2, end: 3 });
        assert!(e.expected.contains(&"U"));

        let e = parse("L p").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 2, end: 3 });

        let e = parse("(p & q").unwrap_err();
        assert!(e.expected.contains(&")"));

        let e = parse("p # q").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 2, end: 3 });

        let e = parse("p ∧ q").unwrap_err();
        assert_eq!(e.span, SourceSpan { start: 2, end: 5 });

        assert!(parse("").is_err());
        assert!(parse("U p").is_err());
        assert!(parse("X[1001] p").is_err());
        assert!(parse("F[] p").is_err());
    }

    #[test]
    fn deep_nesting_is_rejected() {
        let mut s = String::new();
        for _ in 0..2000 {
            s.push('!');
        }
        s.push('p');
        let e = parse(&s).unwrap_err();
        assert!(e.message.contains("deep"));
        assert!(e.span.end <= s.len());
    }
}
