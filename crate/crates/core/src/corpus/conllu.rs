//! CoNLL-U reading and writing.
//!
//! Ten tab-separated columns, `_` for empty fields, blank line between
//! sentences, final blank line on write. The DEPS column (head:relation pairs
//! joined by `|`) populates `enhanced_edges`; HEAD/DEPREL populate
//! `basic_edges`. Multiword ranges (`3-4`) and empty nodes (`3.1`) are
//! skipped and counted, not expanded.
//!
//! Parsing produces edges in canonical order (ascending target, per-target
//! file order), so `parse(serialize(s)) == s` holds for any parsed sentence
//! and for any sentence built in that canonical form.

use crate::corpus::{DepEdge, Sentence, Token};
use crate::error::{Error, Result};

/// Output of [`parse_conllu`]: the sentences plus a count of skipped
/// multiword-range and empty-node lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConlluParse {
    pub sentences: Vec<Sentence>,
    pub skipped_tokens: usize,
}

fn field(value: &str) -> String {
    if value == "_" {
        String::new()
    } else {
        value.to_string()
    }
}

fn unfield(value: &str) -> &str {
    if value.is_empty() {
        "_"
    } else {
        value
    }
}

pub fn parse_conllu(text: &str) -> Result<ConlluParse> {
    let mut sentences = Vec::new();
    let mut skipped = 0usize;
    let mut current = Sentence::default();
    let mut has_lines = false;

    let mut flush = |current: &mut Sentence, has_lines: &mut bool| -> Result<()> {
        if *has_lines {
            current.validate()?;
            sentences.push(std::mem::take(current));
            *has_lines = false;
        }
        Ok(())
    };

    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            flush(&mut current, &mut has_lines)?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim_start().strip_prefix("text =") {
                current.text = value.trim_start().to_string();
                has_lines = true;
            }
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::Conllu {
                line: line_no,
                message: format!("expected 10 columns, found {}", cols.len()),
            });
        }

        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            // Multiword range or empty node: skip, count, keep going.
            skipped += 1;
            has_lines = true;
            continue;
        }
        let index: usize = id.parse().map_err(|_| Error::Conllu {
            line: line_no,
            message: format!("non-integer token index `{id}`"),
        })?;
        if index == 0 {
            return Err(Error::Conllu {
                line: line_no,
                message: "token index 0 is reserved for the root".to_string(),
            });
        }
        if cols[1].is_empty() {
            return Err(Error::Conllu {
                line: line_no,
                message: "empty FORM column".to_string(),
            });
        }

        current.tokens.push(Token {
            index,
            form: cols[1].to_string(),
            lemma: field(cols[2]),
            upos: field(cols[3]),
            xpos: field(cols[4]),
        });

        if cols[6] != "_" {
            let head: usize = cols[6].parse().map_err(|_| Error::Conllu {
                line: line_no,
                message: format!("non-integer head `{}`", cols[6]),
            })?;
            if cols[7] == "_" {
                return Err(Error::Conllu {
                    line: line_no,
                    message: "HEAD set but DEPREL empty".to_string(),
                });
            }
            current.basic_edges.push(DepEdge::new(head, index, cols[7]));
        }

        if cols[8] != "_" {
            for pair in cols[8].split('|') {
                let (head, relation) = pair.split_once(':').ok_or_else(|| Error::Conllu {
                    line: line_no,
                    message: format!("malformed DEPS entry `{pair}`"),
                })?;
                if head.contains('.') {
                    // Edge from an empty node we do not materialize.
                    skipped += 1;
                    continue;
                }
                let head: usize = head.parse().map_err(|_| Error::Conllu {
                    line: line_no,
                    message: format!("non-integer DEPS head `{head}`"),
                })?;
                if relation.is_empty() {
                    return Err(Error::Conllu {
                        line: line_no,
                        message: format!("empty relation in DEPS entry `{pair}`"),
                    });
                }
                current
                    .enhanced_edges
                    .push(DepEdge::new(head, index, relation));
            }
        }
        has_lines = true;
    }
    flush(&mut current, &mut has_lines)?;

    Ok(ConlluParse {
        sentences,
        skipped_tokens: skipped,
    })
}

pub fn serialize_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        if !sentence.text.is_empty() {
            out.push_str("# text = ");
            out.push_str(&sentence.text);
            out.push('\n');
        }
        for token in &sentence.tokens {
            let basic = sentence
                .basic_edges
                .iter()
                .find(|e| e.target == token.index);
            let (head, deprel) = match basic {
                Some(edge) => (edge.source.to_string(), edge.relation.clone()),
                None => ("_".to_string(), "_".to_string()),
            };
            let deps: Vec<String> = sentence
                .enhanced_edges
                .iter()
                .filter(|e| e.target == token.index)
                .map(|e| format!("{}:{}", e.source, e.relation))
                .collect();
            let deps = if deps.is_empty() {
                "_".to_string()
            } else {
                deps.join("|")
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t_\t{}\t{}\t{}\t_\n",
                token.index,
                token.form,
                unfield(&token.lemma),
                unfield(&token.upos),
                unfield(&token.xpos),
                head,
                deprel,
                deps,
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "1\tcat\tcat\tNOUN\tNN\t_\t0\troot\t0:root\t_\n";

    #[test]
    fn minimal_block() {
        let parsed = parse_conllu(MINIMAL).unwrap();
        assert_eq!(parsed.sentences.len(), 1);
        let sentence = &parsed.sentences[0];
        assert_eq!(sentence.tokens.len(), 1);
        assert_eq!(sentence.tokens[0].form, "cat");
        assert_eq!(sentence.basic_edges, vec![DepEdge::new(0, 1, "root")]);
        assert_eq!(sentence.enhanced_edges, vec![DepEdge::new(0, 1, "root")]);
        assert_eq!(parsed.skipped_tokens, 0);
    }

    #[test]
    fn blank_line_splits_blocks() {
        let text = format!("{MINIMAL}\n{MINIMAL}");
        let parsed = parse_conllu(&text).unwrap();
        assert_eq!(parsed.sentences.len(), 2);
    }

    #[test]
    fn wrong_column_count_names_the_line() {
        let text = format!("{MINIMAL}\n1\tdog\tdog\tNOUN\tNN\t_\t0\troot\t0:root\n");
        let err = parse_conllu(&text).unwrap_err();
        match err {
            Error::Conllu { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("9"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_integer_index_is_an_error() {
        let err = parse_conllu("x\tcat\tcat\tNOUN\tNN\t_\t0\troot\t_\t_\n").unwrap_err();
        assert!(matches!(err, Error::Conllu { line: 1, .. }));
    }

    #[test]
    fn multiword_ranges_are_skipped_and_counted() {
        let text = "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n\
                    1\tde\tde\tADP\tIN\t_\t2\tcase\t2:case\t_\n\
                    2\tel\tel\tDET\tDT\t_\t0\troot\t0:root\t_\n";
        let parsed = parse_conllu(text).unwrap();
        assert_eq!(parsed.skipped_tokens, 1);
        assert_eq!(parsed.sentences[0].tokens.len(), 2);
    }

    #[test]
    fn text_comment_round_trips() {
        let mut parsed = parse_conllu(MINIMAL).unwrap();
        parsed.sentences[0].text = "The cat.".to_string();
        let serialized = serialize_conllu(&parsed.sentences);
        let reparsed = parse_conllu(&serialized).unwrap();
        assert_eq!(reparsed.sentences, parsed.sentences);
    }

    #[test]
    fn empty_list_serializes_to_empty_string() {
        assert_eq!(serialize_conllu(&[]), "");
    }

    #[test]
    fn single_token_sentence_has_one_line_and_trailing_blank() {
        let parsed = parse_conllu(MINIMAL).unwrap();
        let serialized = serialize_conllu(&parsed.sentences);
        assert_eq!(serialized, format!("{MINIMAL}\n"));
    }

    #[test]
    fn subtyped_enhanced_relation_keeps_colon_suffix() {
        let text = "1\tParis\tParis\tPROPN\tNNP\t_\t2\tobl\t2:obl:to\t_\n\
                    2\twent\tgo\tVERB\tVBD\t_\t0\troot\t0:root\t_\n";
        let parsed = parse_conllu(text).unwrap();
        assert_eq!(
            parsed.sentences[0].enhanced_edges[0],
            DepEdge::new(2, 1, "obl:to")
        );
    }

    #[test]
    fn round_trip_is_a_fixpoint() {
        let text = "# text = She went to Paris\n\
                    1\tShe\tshe\tPRON\tPRP\t_\t2\tnsubj\t2:nsubj\t_\n\
                    2\twent\tgo\tVERB\tVBD\t_\t0\troot\t0:root\t_\n\
                    3\tto\tto\tADP\tIN\t_\t4\tcase\t4:case\t_\n\
                    4\tParis\tParis\tPROPN\tNNP\t_\t2\tobl\t2:obl:to\t_\n";
        let parsed = parse_conllu(text).unwrap();
        let once = serialize_conllu(&parsed.sentences);
        let reparsed = parse_conllu(&once).unwrap();
        assert_eq!(reparsed.sentences, parsed.sentences);
        assert_eq!(serialize_conllu(&reparsed.sentences), once);
    }
}
