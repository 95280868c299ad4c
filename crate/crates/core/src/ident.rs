use std::fmt;
use std::sync::Arc;

/// A variable or channel name.
///
/// Names print as `base` when `index == 0` and as `base_index` otherwise;
/// [`Ident::parse`] splits a trailing `_<digits>` back into the index so
/// printing and parsing agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident {
    base: Arc<str>,
    index: u32,
}

impl Ident {
    pub fn new(base: &str, index: u32) -> Self {
        Ident { base: Arc::from(base), index }
    }

    /// Reads a source-level identifier, splitting a `_<digits>` suffix.
    pub fn parse(text: &str) -> Self {
        if let Some(pos) = text.rfind('_') {
            let (stem, digits) = (&text[..pos], &text[pos + 1..]);
            if !stem.is_empty() && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(index) = digits.parse::<u32>() {
                    return Ident::new(stem, index);
                }
            }
        }
        Ident::new(text, 0)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn index(&self) -> u32 {
        self.index
    }
}

impl From<&str> for Ident {
    fn from(text: &str) -> Self {
        Ident::parse(text)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}_{}", self.base, self.index)
        }
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Monotone fresh-name supply for one construction session.
///
/// Every name handed out carries an index strictly above every index the
/// supply has been told about, so `(base, index)` pairs never collide with
/// names already present in the terms the session touches.
#[derive(Debug, Clone)]
pub struct NameSupply {
    next: u32,
}

impl NameSupply {
    pub fn new() -> Self {
        NameSupply { next: 1 }
    }

    /// A supply whose names avoid every identifier in `names`.
    pub fn avoiding<'a>(names: impl IntoIterator<Item = &'a Ident>) -> Self {
        let mut supply = NameSupply::new();
        supply.reserve(names);
        supply
    }

    pub fn reserve<'a>(&mut self, names: impl IntoIterator<Item = &'a Ident>) {
        for name in names {
            self.bump(name.index);
        }
    }

    pub fn bump(&mut self, index: u32) {
        if index >= self.next {
            self.next = index + 1;
        }
    }

    pub fn fresh(&mut self, base: &str) -> Ident {
        let id = Ident::new(base, self.next);
        self.next += 1;
        id
    }

    /// A fresh name sharing the stem of `like`.
    pub fn fresh_like(&mut self, like: &Ident) -> Ident {
        self.fresh(like.base())
    }
}

impl Default for NameSupply {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_splits_numeric_suffix() {
        assert_eq!(Ident::parse("k_12"), Ident::new("k", 12));
        assert_eq!(Ident::parse("k"), Ident::new("k", 0));
        assert_eq!(Ident::parse("_3"), Ident::new("_3", 0));
        assert_eq!(Ident::parse("a_b"), Ident::new("a_b", 0));
        assert_eq!(Ident::new("k", 12).to_string(), "k_12");
    }

    #[test]
    fn fresh_names_avoid_reserved() {
        let taken = [Ident::new("x", 4), Ident::new("y", 9)];
        let mut supply = NameSupply::avoiding(taken.iter());
        let a = supply.fresh("x");
        let b = supply.fresh("x");
        assert_eq!(a, Ident::new("x", 10));
        assert_ne!(a, b);
    }
}
