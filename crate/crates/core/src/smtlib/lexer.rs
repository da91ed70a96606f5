use std::collections::VecDeque;
use std::io::BufRead;

use super::FrontendError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    LParen,
    RParen,
    Symbol,
    Keyword,
    Numeral,
    /// `digits.digits`; only meaningful inside attribute values such as
    /// `:smt-lib-version 2.6`.
    Decimal,
    StringLit,
    Reserved,
    /// End of input.
    Eof,
}

/// A lexical token. `text` is the verbatim source text (quoted symbols keep
/// their bars, string literals keep their quotes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub col: u32,
}

impl Token {
    /// Symbol name with `|...|` quoting removed.
    pub fn symbol_name(&self) -> &str {
        let t = self.text.as_str();
        if t.len() >= 2 && t.starts_with('|') && t.ends_with('|') {
            &t[1..t.len() - 1]
        } else {
            t
        }
    }

    /// String literal content with the surrounding quotes removed and `""`
    /// unescaped.
    pub fn string_value(&self) -> String {
        let t = self.text.as_str();
        t[1..t.len() - 1].replace("\"\"", "\"")
    }
}

const RESERVED: &[&str] = &[
    "!",
    "_",
    "as",
    "let",
    "exists",
    "forall",
    "match",
    "par",
    "BINARY",
    "DECIMAL",
    "HEXADECIMAL",
    "NUMERAL",
    "STRING",
];

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
}

/// A source of characters that can be consumed lazily. Implementations must
/// not read ahead of what `peek` requires, so that interactive input is not
/// blocked on.
pub trait CharSource {
    fn peek(&mut self) -> Result<Option<char>, FrontendError>;
    fn bump(&mut self) -> Result<Option<char>, FrontendError>;
    /// Drops any buffered characters up to the next line break.
    fn discard_line(&mut self);
}

pub struct StrSource<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> StrSource<'a> {
    pub fn new(s: &'a str) -> Self {
        StrSource {
            chars: s.chars().peekable(),
        }
    }
}

impl CharSource for StrSource<'_> {
    fn peek(&mut self) -> Result<Option<char>, FrontendError> {
        Ok(self.chars.peek().copied())
    }

    fn bump(&mut self) -> Result<Option<char>, FrontendError> {
        Ok(self.chars.next())
    }

    fn discard_line(&mut self) {
        for c in self.chars.by_ref() {
            if c == '\n' {
                break;
            }
        }
    }
}

/// Line-buffered reader source. A line is only requested from the
/// underlying reader when the buffer is empty and a character is needed.
pub struct ReaderSource<R> {
    reader: R,
    buf: VecDeque<char>,
    eof: bool,
    line_no: u32,
}

impl<R: BufRead> ReaderSource<R> {
    pub fn new(reader: R) -> Self {
        ReaderSource {
            reader,
            buf: VecDeque::new(),
            eof: false,
            line_no: 0,
        }
    }

    fn fill(&mut self) -> Result<(), FrontendError> {
        while self.buf.is_empty() && !self.eof {
            let mut line = String::new();
            self.line_no += 1;
            match self.reader.read_line(&mut line) {
                Ok(0) => self.eof = true,
                Ok(_) => self.buf.extend(line.chars()),
                Err(e) => {
                    self.eof = true;
                    return Err(FrontendError::Lex {
                        line: self.line_no,
                        col: 1,
                        message: format!("unreadable input: {e}"),
                    });
                }
            }
        }
        Ok(())
    }
}

impl<R: BufRead> CharSource for ReaderSource<R> {
    fn peek(&mut self) -> Result<Option<char>, FrontendError> {
        self.fill()?;
        Ok(self.buf.front().copied())
    }

    fn bump(&mut self) -> Result<Option<char>, FrontendError> {
        self.fill()?;
        Ok(self.buf.pop_front())
    }

    fn discard_line(&mut self) {
        while let Some(c) = self.buf.pop_front() {
            if c == '\n' {
                break;
            }
        }
    }
}

/// Pull-based lexer. Each call to [`Lexer::next_token`] consumes exactly the
/// characters of one token plus any leading whitespace and comments.
pub struct Lexer<S> {
    src: S,
    line: u32,
    col: u32,
}

impl<S: CharSource> Lexer<S> {
    pub fn new(src: S) -> Self {
        Lexer { src, line: 1, col: 1 }
    }

    pub fn position(&self) -> (u32, u32) {
        (self.line, self.col)
    }

    fn bump(&mut self) -> Result<Option<char>, FrontendError> {
        let c = self.src.bump()?;
        match c {
            Some('\n') => {
                self.line += 1;
                self.col = 1;
            }
            Some(_) => self.col += 1,
            None => {}
        }
        Ok(c)
    }

    fn error(&self, line: u32, col: u32, message: impl Into<String>) -> FrontendError {
        FrontendError::Lex {
            line,
            col,
            message: message.into(),
        }
    }

    /// Skips the rest of the current input line; used to resynchronize
    /// after a lexical error in interactive mode.
    pub fn skip_line(&mut self) {
        self.src.discard_line();
        self.line += 1;
        self.col = 1;
    }

    fn skip_trivia(&mut self) -> Result<(), FrontendError> {
        while let Some(c) = self.src.peek()? {
            if c.is_whitespace() {
                self.bump()?;
            } else if c == ';' {
                while let Some(c) = self.src.peek()? {
                    if c == '\n' {
                        break;
                    }
                    self.bump()?;
                }
            } else {
                break;
            }
        }
        Ok(())
    }

    pub fn next_token(&mut self) -> Result<Token, FrontendError> {
        self.skip_trivia()?;
        let (line, col) = (self.line, self.col);
        let tok = |kind, text: String| Token { kind, text, line, col };
        let c = match self.src.peek()? {
            None => return Ok(tok(TokenKind::Eof, String::new())),
            Some(c) => c,
        };
        match c {
            '(' => {
                self.bump()?;
                Ok(tok(TokenKind::LParen, "(".into()))
            }
            ')' => {
                self.bump()?;
                Ok(tok(TokenKind::RParen, ")".into()))
            }
            '"' => {
                let mut text = String::new();
                text.push(self.bump()?.unwrap());
                loop {
                    match self.bump()? {
                        None => return Err(self.error(line, col, "unterminated string literal")),
                        Some('"') => {
                            text.push('"');
                            if self.src.peek()? == Some('"') {
                                self.bump()?;
                                text.push('"');
                            } else {
                                break;
                            }
                        }
                        Some(ch) => text.push(ch),
                    }
                }
                Ok(tok(TokenKind::StringLit, text))
            }
            '|' => {
                let mut text = String::new();
                text.push(self.bump()?.unwrap());
                loop {
                    match self.bump()? {
                        None => return Err(self.error(line, col, "unterminated quoted symbol")),
                        Some('\\') => return Err(self.error(line, col, "backslash in quoted symbol")),
                        Some('|') => {
                            text.push('|');
                            break;
                        }
                        Some(ch) => text.push(ch),
                    }
                }
                Ok(tok(TokenKind::Symbol, text))
            }
            ':' => {
                let mut text = String::new();
                text.push(self.bump()?.unwrap());
                while let Some(ch) = self.src.peek()? {
                    if !is_symbol_char(ch) {
                        break;
                    }
                    text.push(ch);
                    self.bump()?;
                }
                if text.len() == 1 {
                    return Err(self.error(line, col, "empty keyword"));
                }
                Ok(tok(TokenKind::Keyword, text))
            }
            '0'..='9' => {
                let mut text = String::new();
                while let Some(ch) = self.src.peek()? {
                    if !ch.is_ascii_digit() {
                        break;
                    }
                    text.push(ch);
                    self.bump()?;
                }
                if text.len() > 1 && text.starts_with('0') {
                    return Err(self.error(line, col, format!("numeral `{text}` has a leading zero")));
                }
                if self.src.peek()? == Some('.') {
                    text.push('.');
                    self.bump()?;
                    let before = text.len();
                    while let Some(ch) = self.src.peek()? {
                        if !ch.is_ascii_digit() {
                            break;
                        }
                        text.push(ch);
                        self.bump()?;
                    }
                    if text.len() == before {
                        return Err(self.error(line, col, format!("malformed decimal `{text}`")));
                    }
                    return Ok(tok(TokenKind::Decimal, text));
                }
                Ok(tok(TokenKind::Numeral, text))
            }
            '#' => Err(self.error(line, col, "hexadecimal and binary literals are not supported")),
            c if is_symbol_char(c) => {
                let mut text = String::new();
                while let Some(ch) = self.src.peek()? {
                    if !is_symbol_char(ch) {
                        break;
                    }
                    text.push(ch);
                    self.bump()?;
                }
                let kind = if RESERVED.contains(&text.as_str()) {
                    TokenKind::Reserved
                } else {
                    TokenKind::Symbol
                };
                Ok(tok(kind, text))
            }
            other => Err(self.error(line, col, format!("illegal character {other:?}"))),
        }
    }
}

/// Tokenizes a whole string. The returned sequence always ends with an
/// [`TokenKind::Eof`] token.
pub fn tokenize(input: &str) -> Result<Vec<Token>, FrontendError> {
    let mut lexer = Lexer::new(StrSource::new(input));
    let mut out = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let done = t.kind == TokenKind::Eof;
        out.push(t);
        if done {
            return Ok(out);
        }
    }
}
