use super::lexer::{is_ident_char, is_ident_start};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placeholder {
    /// 1-based line of the witness node.
    LineNo,
    RuleId,
    /// Qualified name of the witness, or `<unknown>`.
    Name,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Text(String),
    Field(Placeholder),
    /// A `{word}` that is not a recognized placeholder; rejected by validation.
    Unknown(String),
}

/// A report message template. `{word}` sequences are placeholders; any other
/// brace is literal text.
#[derive(Debug, Clone)]
pub struct ActionTemplate {
    raw: String,
    segments: Vec<Segment>,
}

impl PartialEq for ActionTemplate {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw
    }
}

impl Eq for ActionTemplate {}

impl ActionTemplate {
    pub fn new(raw: &str) -> Self {
        Self {
            raw: raw.to_string(),
            segments: split(raw),
        }
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn unknown_placeholders(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Unknown(word) => Some(word.as_str()),
            _ => None,
        })
    }

    pub fn render(&self, line: u32, rule_id: &str, name: Option<&str>) -> String {
        let mut out = String::with_capacity(self.raw.len() + 8);
        for segment in &self.segments {
            match segment {
                Segment::Text(text) => out.push_str(text),
                Segment::Field(Placeholder::LineNo) => out.push_str(&line.to_string()),
                Segment::Field(Placeholder::RuleId) => out.push_str(rule_id),
                Segment::Field(Placeholder::Name) => out.push_str(name.unwrap_or("<unknown>")),
                Segment::Unknown(word) => {
                    out.push('{');
                    out.push_str(word);
                    out.push('}');
                }
            }
        }
        out
    }
}

fn split(raw: &str) -> Vec<Segment> {
    let mut segments = Vec::new();
    let mut text = String::new();
    let mut rest = raw;
    while let Some(open) = rest.find('{') {
        text.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let word_len = after
            .char_indices()
            .find(|&(i, c)| if i == 0 { !is_ident_start(c) } else { !is_ident_char(c) })
            .map_or(after.len(), |(i, _)| i);
        if word_len > 0 && after[word_len..].starts_with('}') {
            if !text.is_empty() {
                segments.push(Segment::Text(std::mem::take(&mut text)));
            }
            let word = &after[..word_len];
            segments.push(match word {
                "lineno" => Segment::Field(Placeholder::LineNo),
                "rule_id" => Segment::Field(Placeholder::RuleId),
                "name" => Segment::Field(Placeholder::Name),
                other => Segment::Unknown(other.to_string()),
            });
            rest = &after[word_len + 1..];
        } else {
            text.push('{');
            rest = after;
        }
    }
    text.push_str(rest);
    if !text.is_empty() {
        segments.push(Segment::Text(text));
    }
    segments
}
