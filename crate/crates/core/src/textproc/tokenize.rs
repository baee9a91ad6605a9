/// Contraction suffixes split off as their own tokens.
pub(crate) const CLITICS: [&str; 7] = ["n't", "'s", "'re", "'ve", "'ll", "'d", "'m"];

fn is_edge(c: char) -> bool {
    !c.is_alphanumeric()
}

fn strip_edges(s: &str) -> &str {
    s.trim_matches(is_edge)
}

/// Lowercase, split on Unicode whitespace, strip leading/trailing punctuation,
/// split contractions at the apostrophe. Internal apostrophes and hyphens survive.
///
/// `"don't"` becomes `["do", "n't"]`, `"it's"` becomes `["it", "'s"]`.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        let lower = raw.to_lowercase().replace('\u{2019}', "'");
        if CLITICS.contains(&lower.as_str()) {
            out.push(lower);
            continue;
        }
        let tok = strip_edges(&lower);
        if tok.is_empty() {
            continue;
        }
        push_split(tok, &mut out);
    }
    out
}

fn push_split(tok: &str, out: &mut Vec<String>) {
    let suffix = if tok.len() > 3 && tok.ends_with("n't") {
        Some("n't")
    } else {
        tok.rfind('\'').and_then(|p| {
            let tail = &tok[p..];
            (p > 0 && CLITICS[1..].contains(&tail)).then_some(tail)
        })
    };
    match suffix {
        Some(suffix) => {
            let stem = strip_edges(&tok[..tok.len() - suffix.len()]);
            if !stem.is_empty() {
                push_split(stem, out);
            }
            out.push(suffix.to_string());
        }
        None => out.push(tok.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_sentences() {
        assert_eq!(tokenize("The painting is red."), ["the", "painting", "is", "red"]);
        assert_eq!(tokenize("it reminds me of my grandmother").len(), 6);
        assert_eq!(tokenize("don't"), ["do", "n't"]);
        assert_eq!(tokenize("It’s a dark-blue \"sky\"!"), ["it", "'s", "a", "dark-blue", "sky"]);
        assert_eq!(tokenize("Can't"), ["ca", "n't"]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ... !!  ").is_empty());
    }

    #[test]
    fn internal_punctuation_kept() {
        assert_eq!(tokenize("o'clock, 3.5 rock'n'roll"), ["o'clock", "3.5", "rock'n'roll"]);
    }

    proptest! {
        #[test]
        fn idempotent_on_own_output(s in "[a-zA-Z' .,!\\-\u{2019}]{0,40}") {
            let once = tokenize(&s);
            let twice = tokenize(&once.join(" "));
            prop_assert_eq!(&once, &twice);
            for t in &once {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
            }
        }
    }
}
