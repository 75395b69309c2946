//! Recursive-descent parser for the ASCII surface syntax, with Unicode
//! aliases.
//!
//! Grammar (low to high precedence):
//!
//! ```text
//! formula := imp
//! imp     := or (("->" | "<->") imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "[]" unary | "<>" unary | "~" unary | atom
//! atom    := ident | "_|_" | "(" formula ")"
//! ```
//!
//! `a <-> b` expands to `(a -> b) & (b -> a)`; the other abbreviations expand
//! per [`Formula`]'s derived constructors. Unicode `□ ◇ ¬ → ⊥ ⊤ ∧ ∨ ↔` are
//! accepted as aliases for the ASCII operators.

use crate::formula::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    /// 1-based character offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    LParen,
    RParen,
    BoxOp,
    DiamondOp,
    Not,
    And,
    Or,
    Arrow,
    Iff,
    Bot,
    Top,
    Ident(String),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::BoxOp => "'[]'".into(),
            Token::DiamondOp => "'<>'".into(),
            Token::Not => "'~'".into(),
            Token::And => "'&'".into(),
            Token::Or => "'|'".into(),
            Token::Arrow => "'->'".into(),
            Token::Iff => "'<->'".into(),
            Token::Bot => "'_|_'".into(),
            Token::Top => "'⊤'".into(),
            Token::Ident(name) => format!("identifier '{name}'"),
        }
    }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize, // 0-based index into chars
}

impl Lexer {
    fn new(text: &str) -> Self {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position: at + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Tokens paired with the 0-based position of their first character.
    fn tokenize(mut self) -> Result<Vec<(Token, usize)>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
                continue;
            }
            let start = self.pos;
            self.pos += 1;
            let token = match c {
                '(' => Token::LParen,
                ')' => Token::RParen,
                '~' | '¬' | '!' => Token::Not,
                '&' | '∧' => Token::And,
                '|' | '∨' => Token::Or,
                '□' => Token::BoxOp,
                '◇' | '◊' => Token::DiamondOp,
                '→' => Token::Arrow,
                '↔' => Token::Iff,
                '⊥' => Token::Bot,
                '⊤' => Token::Top,
                '[' => {
                    if self.eat(']') {
                        Token::BoxOp
                    } else {
                        return Err(self.error(start, "expected ']' after '['"));
                    }
                }
                '-' => {
                    if self.eat('>') {
                        Token::Arrow
                    } else {
                        return Err(self.error(start, "expected '>' after '-'"));
                    }
                }
                '<' => {
                    if self.eat('>') {
                        Token::DiamondOp
                    } else if self.eat('-') {
                        if self.eat('>') {
                            Token::Iff
                        } else {
                            return Err(self.error(start, "expected '>' after '<-'"));
                        }
                    } else {
                        return Err(self.error(start, "expected '>' or '->' after '<'"));
                    }
                }
                '_' => {
                    if self.eat('|') && self.eat('_') {
                        Token::Bot
                    } else {
                        return Err(self.error(start, "expected '_|_'"));
                    }
                }
                c if c.is_ascii_alphabetic() => {
                    let mut name = String::new();
                    name.push(c);
                    while let Some(c2) = self.peek() {
                        if c2.is_ascii_alphanumeric() || c2 == '_' {
                            name.push(c2);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Token::Ident(name)
                }
                other => {
                    return Err(self.error(start, format!("unexpected character '{other}'")));
                }
            };
            out.push((token, start));
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| p + 1)
            .unwrap_or(self.input_len + 1)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.here(),
            message: message.into(),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        match self.peek() {
            Some(Token::Arrow) => {
                self.bump();
                let right = self.imp()?;
                Ok(Formula::imp(left, right))
            }
            Some(Token::Iff) => {
                self.bump();
                let right = self.imp()?;
                Ok(Formula::iff(left, right))
            }
            _ => Ok(left),
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.bump();
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::BoxOp) => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Token::DiamondOp) => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            Some(Token::Not) => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.bump() {
            Some(Token::Ident(name)) => Ok(Formula::Var(name)),
            Some(Token::Bot) => Ok(Formula::Bot),
            Some(Token::Top) => Ok(Formula::top()),
            Some(Token::LParen) => {
                let inner = self.imp()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    Some(t) => Err(ParseError {
                        position: self.tokens[self.pos - 1].1 + 1,
                        message: format!("expected ')', found {}", t.describe()),
                    }),
                    None => Err(self.error("expected ')', found end of input")),
                }
            }
            Some(t) => Err(ParseError {
                position: self.tokens[self.pos - 1].1 + 1,
                message: format!("expected a formula, found {}", t.describe()),
            }),
            None => Err(self.error("expected a formula, found end of input")),
        }
    }
}

/// Parse a formula from its surface syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let input_len = text.chars().count();
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        input_len,
    };
    let formula = parser.imp()?;
    if let Some(t) = parser.peek() {
        let t = t.clone();
        return Err(parser.error(format!("unexpected {} after formula", t.describe())));
    }
    Ok(formula)
}
