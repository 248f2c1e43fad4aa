//! Tokenizer for the expression language.
//!
//! Token classes follow the grammar: decimal integer and floating-point
//! literals, double-quoted string literals with the usual escapes,
//! single-character literals without escapes, identifiers, separators and
//! operators. Whitespace (space, tab, newline, CR, form feed) is skipped.

use super::Pos;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow::Pow, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    IntLit(BigInt),
    RealLit(BigRational),
    StrLit(String),
    CharLit(char),
    Ident(String),
    // separators
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Dot,
    // operators
    Lt,
    Gt,
    Le,
    Ge,
    EqEq,
    Ne,
    Not,
    Tilde,
    OrOr,
    AndAnd,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Caret,
    BitAnd,
    BitOr,
    Shl,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        use TokenKind::*;
        match self {
            IntLit(_) => "integer literal".into(),
            RealLit(_) => "real literal".into(),
            StrLit(_) => "string literal".into(),
            CharLit(_) => "character literal".into(),
            Ident(name) => format!("identifier `{name}`"),
            LParen => "`(`".into(),
            RParen => "`)`".into(),
            LBracket => "`[`".into(),
            RBracket => "`]`".into(),
            LBrace => "`{`".into(),
            RBrace => "`}`".into(),
            Comma => "`,`".into(),
            Dot => "`.`".into(),
            Lt => "`<`".into(),
            Gt => "`>`".into(),
            Le => "`<=`".into(),
            Ge => "`>=`".into(),
            EqEq => "`==`".into(),
            Ne => "`!=`".into(),
            Not => "`!`".into(),
            Tilde => "`~`".into(),
            OrOr => "`||`".into(),
            AndAnd => "`&&`".into(),
            Plus => "`+`".into(),
            Minus => "`-`".into(),
            Star => "`*`".into(),
            Slash => "`/`".into(),
            Percent => "`%`".into(),
            Caret => "`^`".into(),
            BitAnd => "`&`".into(),
            BitOr => "`|`".into(),
            Shl => "`<<`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source slice this token was read from.
    pub lexeme: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LexError {
    #[error("{pos}: unexpected character `{ch}`")]
    Unexpected { pos: Pos, ch: char },
    #[error("{pos}: unterminated string literal")]
    UnterminatedString { pos: Pos },
    #[error("{pos}: character literal must contain exactly one character")]
    UnterminatedChar { pos: Pos },
    #[error("{pos}: invalid escape `\\{ch}` in string literal")]
    BadEscape { pos: Pos, ch: char },
    #[error("{pos}: `=` is not an operator (use `==`)")]
    LoneEquals { pos: Pos },
}

struct Scanner<'a> {
    src: &'a [u8],
    at: usize,
    line: u32,
    col: u32,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<char> {
        self.src.get(self.at).map(|b| *b as char)
    }

    fn peek2(&self) -> Option<char> {
        self.src.get(self.at + 1).map(|b| *b as char)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }
}

/// Tokenizes `source`, returning the full stream or the first lexical error.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    // The language is ASCII; reject non-ASCII up front so byte scanning is safe.
    if let Some((off, ch)) = source.char_indices().find(|(_, c)| !c.is_ascii()) {
        let upto = &source[..off];
        let line = upto.matches('\n').count() as u32 + 1;
        let col = upto.len() as u32 - upto.rfind('\n').map(|i| i as u32 + 1).unwrap_or(0) + 1;
        return Err(LexError::Unexpected { pos: Pos { line, col }, ch });
    }

    let mut s = Scanner { src: source.as_bytes(), at: 0, line: 1, col: 1 };
    let mut tokens = Vec::new();

    while let Some(c) = s.peek() {
        let start = s.at;
        let pos = s.pos();
        let lexeme = |s: &Scanner, start: usize| source[start..s.at].to_string();
        match c {
            ' ' | '\t' | '\n' | '\r' | '\x0c' => {
                s.bump();
            }
            '0'..='9' => {
                let kind = scan_number(&mut s)?;
                tokens.push(Token { kind, lexeme: lexeme(&s, start), pos });
            }
            '.' => {
                if s.peek2().map_or(false, |c| c.is_ascii_digit()) {
                    let kind = scan_number(&mut s)?;
                    tokens.push(Token { kind, lexeme: lexeme(&s, start), pos });
                } else {
                    s.bump();
                    tokens.push(Token { kind: TokenKind::Dot, lexeme: ".".into(), pos });
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut name = String::new();
                while let Some(c) = s.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        s.bump();
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(name),
                    lexeme: lexeme(&s, start),
                    pos,
                });
            }
            '"' => {
                s.bump();
                let mut text = String::new();
                loop {
                    match s.peek() {
                        None | Some('\n') | Some('\r') => {
                            return Err(LexError::UnterminatedString { pos })
                        }
                        Some('"') => {
                            s.bump();
                            break;
                        }
                        Some('\\') => {
                            s.bump();
                            let esc = s.bump().ok_or(LexError::UnterminatedString { pos })?;
                            text.push(match esc {
                                'n' => '\n',
                                't' => '\t',
                                'b' => '\x08',
                                'r' => '\r',
                                'f' => '\x0c',
                                '\\' => '\\',
                                '\'' => '\'',
                                '"' => '"',
                                other => return Err(LexError::BadEscape { pos, ch: other }),
                            });
                        }
                        Some(other) => {
                            text.push(other);
                            s.bump();
                        }
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::StrLit(text),
                    lexeme: lexeme(&s, start),
                    pos,
                });
            }
            '\'' => {
                s.bump();
                let ch = match s.peek() {
                    Some(c) if c != '\'' && c != '\\' && c != '\n' && c != '\r' => c,
                    _ => return Err(LexError::UnterminatedChar { pos }),
                };
                s.bump();
                if s.peek() != Some('\'') {
                    return Err(LexError::UnterminatedChar { pos });
                }
                s.bump();
                tokens.push(Token {
                    kind: TokenKind::CharLit(ch),
                    lexeme: lexeme(&s, start),
                    pos,
                });
            }
            _ => {
                s.bump();
                use TokenKind::*;
                let two = |s: &mut Scanner, k: TokenKind| {
                    s.bump();
                    k
                };
                let kind = match (c, s.peek()) {
                    ('<', Some('=')) => two(&mut s, Le),
                    ('<', Some('<')) => two(&mut s, Shl),
                    ('<', _) => Lt,
                    ('>', Some('=')) => two(&mut s, Ge),
                    ('>', _) => Gt,
                    ('=', Some('=')) => two(&mut s, EqEq),
                    ('=', _) => return Err(LexError::LoneEquals { pos }),
                    ('!', Some('=')) => two(&mut s, Ne),
                    ('!', _) => Not,
                    ('|', Some('|')) => two(&mut s, OrOr),
                    ('|', _) => BitOr,
                    ('&', Some('&')) => two(&mut s, AndAnd),
                    ('&', _) => BitAnd,
                    ('(', _) => LParen,
                    (')', _) => RParen,
                    ('[', _) => LBracket,
                    (']', _) => RBracket,
                    ('{', _) => LBrace,
                    ('}', _) => RBrace,
                    (',', _) => Comma,
                    ('+', _) => Plus,
                    ('-', _) => Minus,
                    ('*', _) => Star,
                    ('/', _) => Slash,
                    ('%', _) => Percent,
                    ('^', _) => Caret,
                    ('~', _) => Tilde,
                    (other, _) => return Err(LexError::Unexpected { pos, ch: other }),
                };
                tokens.push(Token { kind, lexeme: lexeme(&s, start), pos });
            }
        }
    }
    Ok(tokens)
}

/// Scans an integer or floating-point literal starting at the current digit
/// (or a dot followed by a digit).
fn scan_number(s: &mut Scanner) -> Result<TokenKind, LexError> {
    let mut int_part = String::new();
    let mut frac_part = String::new();
    let mut exp_part: Option<i64> = None;
    let mut is_real = false;

    while let Some(c) = s.peek() {
        if c.is_ascii_digit() {
            int_part.push(c);
            s.bump();
        } else {
            break;
        }
    }
    if s.peek() == Some('.') && s.peek2().map_or(true, |c| c.is_ascii_digit() || !c.is_ascii_alphabetic()) {
        // `1.` and `1.5` are reals; `S.length()` must leave the dot alone —
        // a dot directly followed by a letter is a method call.
        if s.peek2().map_or(false, |c| c.is_ascii_alphabetic() || c == '_') {
            // method call on an integer literal; leave the dot for the parser
        } else {
            is_real = true;
            s.bump();
            while let Some(c) = s.peek() {
                if c.is_ascii_digit() {
                    frac_part.push(c);
                    s.bump();
                } else {
                    break;
                }
            }
        }
    }
    if matches!(s.peek(), Some('e') | Some('E')) {
        // exponent only if followed by [+-]?digit
        let mut look = s.at + 1;
        let mut sign = 1i64;
        if matches!(s.src.get(look), Some(b'+') | Some(b'-')) {
            if s.src[look] == b'-' {
                sign = -1;
            }
            look += 1;
        }
        if s.src.get(look).map_or(false, |b| b.is_ascii_digit()) {
            is_real = true;
            s.bump(); // e
            if matches!(s.peek(), Some('+') | Some('-')) {
                s.bump();
            }
            let mut digits = String::new();
            while let Some(c) = s.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    s.bump();
                } else {
                    break;
                }
            }
            exp_part = Some(sign * digits.parse::<i64>().unwrap_or(0));
        }
    }

    if !is_real {
        return Ok(TokenKind::IntLit(int_part.parse::<BigInt>().expect("digits")));
    }
    // exact rational: (int.frac) * 10^exp
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let mut value = BigRational::new(digits.parse::<BigInt>().expect("digits"), BigInt::from(1));
    let scale = BigRational::new(BigInt::from(10), BigInt::from(1)).pow(frac_part.len() as i32);
    if !scale.is_zero() {
        value /= scale;
    }
    if let Some(e) = exp_part {
        let ten = BigRational::new(BigInt::from(10), BigInt::from(1));
        value *= ten.pow(e as i32);
    }
    Ok(TokenKind::RealLit(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn relational_stream() {
        use TokenKind::*;
        assert_eq!(
            kinds("SA>0 && SA<=0"),
            vec![
                Ident("SA".into()),
                Gt,
                IntLit(BigInt::from(0)),
                AndAnd,
                Ident("SA".into()),
                Le,
                IntLit(BigInt::from(0)),
            ]
        );
    }

    #[test]
    fn set_literal_tokens() {
        use TokenKind::*;
        let got = kinds("{1, 4, 7, 16}");
        assert_eq!(got[0], LBrace);
        assert_eq!(got[got.len() - 1], RBrace);
        assert_eq!(got.iter().filter(|k| matches!(k, IntLit(_))).count(), 4);
        assert_eq!(got.iter().filter(|k| matches!(k, Comma)).count(), 3);
    }

    #[test]
    fn empty_char_literal_rejected() {
        assert!(matches!(
            tokenize("''"),
            Err(LexError::UnterminatedChar { .. })
        ));
    }

    #[test]
    fn method_call_on_int_literal_keeps_dot() {
        use TokenKind::*;
        let got = kinds("5.size()");
        assert_eq!(got[0], IntLit(BigInt::from(5)));
        assert_eq!(got[1], Dot);
    }

    #[test]
    fn real_literals() {
        match &kinds("1.5")[0] {
            TokenKind::RealLit(r) => {
                assert_eq!(r, &BigRational::new(BigInt::from(3), BigInt::from(2)))
            }
            other => panic!("expected real, got {other:?}"),
        }
        match &kinds("2e3")[0] {
            TokenKind::RealLit(r) => {
                assert_eq!(r, &BigRational::from(BigInt::from(2000)))
            }
            other => panic!("expected real, got {other:?}"),
        }
    }

    #[test]
    fn string_escapes() {
        match &kinds(r#""a\tb""#)[0] {
            TokenKind::StrLit(s) => assert_eq!(s, "a\tb"),
            other => panic!("expected string, got {other:?}"),
        }
        assert!(matches!(
            tokenize("\"abc"),
            Err(LexError::UnterminatedString { .. })
        ));
    }

    #[test]
    fn lexeme_reproduces_source_slice() {
        let toks = tokenize("SA >= 12").unwrap();
        assert_eq!(toks[0].lexeme, "SA");
        assert_eq!(toks[1].lexeme, ">=");
        assert_eq!(toks[2].lexeme, "12");
    }
}
