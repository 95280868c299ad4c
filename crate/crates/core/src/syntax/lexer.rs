use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u32),
    Let,
    In,
    New,
    Unit,
    Ch,
    Behavior,
    Result,
    Star,
    Backslash,
    Colon,
    Dot,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Pipe,
    At,
    Arrow,
    Eq,
    Bang,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Eof => f.write_str("end of input"),
            other => {
                let s = match other {
                    Tok::Let => "let",
                    Tok::In => "in",
                    Tok::New => "new",
                    Tok::Unit => "Unit",
                    Tok::Ch => "Ch",
                    Tok::Behavior => "#b",
                    Tok::Result => "#R",
                    Tok::Star => "*",
                    Tok::Backslash => "\\",
                    Tok::Colon => ":",
                    Tok::Dot => ".",
                    Tok::Comma => ",",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrack => "[",
                    Tok::RBrack => "]",
                    Tok::Pipe => "|",
                    Tok::At => "@",
                    Tok::Arrow => "->",
                    Tok::Eq => "=",
                    Tok::Bang => "!",
                    _ => unreachable!(),
                };
                write!(f, "`{s}`")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let simple = match c {
            '*' => Some(Tok::Star),
            '\\' => Some(Tok::Backslash),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '|' => Some(Tok::Pipe),
            '@' => Some(Tok::At),
            '=' => Some(Tok::Eq),
            '!' => Some(Tok::Bang),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, line: start_line, col: start_col });
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Spanned { tok: Tok::Arrow, line: start_line, col: start_col });
            advance(2, &mut i, &mut col);
            continue;
        }
        if c == '#' {
            let tok = match chars.get(i + 1) {
                Some('b') => Tok::Behavior,
                Some('R') => Tok::Result,
                _ => return Err(ParseError::new(start_line, start_col, "expected `#b` or `#R`")),
            };
            if chars.get(i + 2).is_some_and(|&c| is_ident_char(c)) {
                return Err(ParseError::new(start_line, start_col, "expected `#b` or `#R`"));
            }
            out.push(Spanned { tok, line: start_line, col: start_col });
            advance(2, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let n = text.parse().map_err(|_| ParseError::new(start_line, start_col, "number too large"))?;
            out.push(Spanned { tok: Tok::Num(n), line: start_line, col: start_col });
            advance(j - i, &mut i, &mut col);
            continue;
        }
        if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let tok = match text.as_str() {
                "let" => Tok::Let,
                "in" => Tok::In,
                "new" => Tok::New,
                "Unit" => Tok::Unit,
                "Ch" => Tok::Ch,
                _ => Tok::Ident(text),
            };
            out.push(Spanned { tok, line: start_line, col: start_col });
            advance(j - i, &mut i, &mut col);
            continue;
        }
        return Err(ParseError::new(start_line, start_col, format!("unexpected character `{c}`")));
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Position of the first occurrence of identifier `name`, if any.
pub fn locate_ident(src: &str, name: &str) -> Option<(usize, usize)> {
    let toks = lex(src).ok()?;
    toks.into_iter().find(|t| t.tok == Tok::Ident(name.to_string())).map(|t| (t.line, t.col))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = lex("let[inf] x = *\n in @(x', y)").unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Let);
        assert_eq!(kinds[2], Tok::Ident("inf".into()));
        assert!(kinds.contains(&Tok::Ident("x'".into())));
        let in_tok = toks.iter().find(|t| t.tok == Tok::In).unwrap();
        assert_eq!((in_tok.line, in_tok.col), (2, 2));
    }

    #[test]
    fn bad_character_reports_position() {
        let err = lex("x\n  $").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
    }
}
