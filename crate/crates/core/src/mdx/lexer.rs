use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    /// Contents of `[...]`, trimmed; `]]` escapes a literal `]`. A nested
    /// `[` means the bracket was never closed.
    Name(String),
    Word(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Name(n) => write!(f, "`[{n}]`"),
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexError {
    UnterminatedBracket(Pos),
    UnexpectedChar(char, Pos),
}

pub fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, LexError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '{' | '}' | '(' | ')' | ',' | '.' => {
                bump!();
                out.push((
                    match c {
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        ',' => Tok::Comma,
                        _ => Tok::Dot,
                    },
                    pos,
                ));
            }
            '[' => {
                bump!();
                let mut name = String::new();
                loop {
                    match bump!() {
                        None | Some('[') => return Err(LexError::UnterminatedBracket(pos)),
                        Some(']') => {
                            if chars.peek() == Some(&']') {
                                bump!();
                                name.push(']');
                            } else {
                                break;
                            }
                        }
                        Some(ch) => name.push(ch),
                    }
                }
                out.push((Tok::Name(name.trim().to_string()), pos));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_alphanumeric() || ch == '_' {
                        word.push(ch);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Word(word), pos));
            }
            other => return Err(LexError::UnexpectedChar(other, pos)),
        }
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}
