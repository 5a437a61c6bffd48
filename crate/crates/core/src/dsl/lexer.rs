use std::fmt;

/// Position of a token: 1-based line, 1-based column counted in characters,
/// and width in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Decimal literal; the source text is kept so integers parse exactly.
    Number(f64, String),
    /// A decimal literal immediately followed by `i`.
    Imag(f64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    At,
    Eq,
    Plus,
    Minus,
    Newline,
    Eof,
    /// A character that starts no token, or a malformed literal.
    Bad(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Number(_, text) => f.write_str(text),
            Tok::Imag(v) => write!(f, "{v}i"),
            Tok::LBrace => f.write_str("{"),
            Tok::RBrace => f.write_str("}"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::LBracket => f.write_str("["),
            Tok::RBracket => f.write_str("]"),
            Tok::Comma => f.write_str(","),
            Tok::Semi => f.write_str(";"),
            Tok::Colon => f.write_str(":"),
            Tok::At => f.write_str("@"),
            Tok::Eq => f.write_str("="),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
            Tok::Bad(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
    /// Source text of the token (empty for end of line / input).
    pub text: String,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Vec<Token> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let start = Span {
            line,
            column: col,
            width: 1,
        };
        match c {
            '\n' => {
                out.push(Token {
                    tok: Tok::Newline,
                    span: start,
                    text: String::new(),
                });
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            _ => {}
        }

        let begin = i;
        let tok = if is_ident_start(c) {
            while i < chars.len() && is_ident_continue(chars[i]) {
                i += 1;
            }
            Tok::Ident(chars[begin..i].iter().collect())
        } else if c.is_ascii_digit() {
            lex_number(&chars, &mut i)
        } else {
            i += 1;
            match c {
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '@' => Tok::At,
                '=' => Tok::Eq,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                other => Tok::Bad(other.to_string()),
            }
        };
        let width = i - begin;
        out.push(Token {
            tok,
            span: Span { width, ..start },
            text: chars[begin..i].iter().collect(),
        });
        col += width;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span {
            line,
            column: col,
            width: 0,
        },
        text: String::new(),
    });
    out
}

fn lex_number(chars: &[char], i: &mut usize) -> Tok {
    let begin = *i;
    let digits = |i: &mut usize| {
        let s = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > s
    };
    digits(i);
    if *i < chars.len() && chars[*i] == '.' {
        *i += 1;
        if !digits(i) {
            return bad(chars, begin, i);
        }
    }
    if *i < chars.len() && (chars[*i] == 'e' || chars[*i] == 'E') {
        *i += 1;
        if *i < chars.len() && (chars[*i] == '+' || chars[*i] == '-') {
            *i += 1;
        }
        if !digits(i) {
            return bad(chars, begin, i);
        }
    }
    let text: String = chars[begin..*i].iter().collect();
    let value: f64 = match text.parse() {
        Ok(v) if f64::is_finite(v) => v,
        _ => return bad(chars, begin, i),
    };
    if *i < chars.len()
        && chars[*i] == 'i'
        && !chars.get(*i + 1).is_some_and(|&c| is_ident_continue(c))
    {
        *i += 1;
        return Tok::Imag(value);
    }
    if *i < chars.len() && is_ident_continue(chars[*i]) {
        return bad(chars, begin, i);
    }
    Tok::Number(value, text)
}

/// Swallows the rest of a malformed literal so the error covers all of it.
fn bad(chars: &[char], begin: usize, i: &mut usize) -> Tok {
    while *i < chars.len() && (is_ident_continue(chars[*i]) || chars[*i] == '.') {
        *i += 1;
    }
    Tok::Bad(chars[begin..*i].iter().collect())
}
