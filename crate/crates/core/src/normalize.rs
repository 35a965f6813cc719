//! Hashtag extraction and canonicalization.
//!
//! A canonical hashtag is lowercase ASCII letters, digits and underscores,
//! without the leading `#`, and at least `min_len` characters long.

use std::collections::HashSet;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default minimum length for a canonical hashtag.
pub const DEFAULT_MIN_LEN: usize = 3;

/// A hashtag exactly as it appeared in a post (possibly with `#`, mixed case, punctuation).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawTag(String);

impl RawTag {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::EmptyRawTag);
        }
        Ok(Self(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RawTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Canonical hashtag; the node identity in the co-occurrence graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NormalizedHashtag(String);

impl NormalizedHashtag {
    /// Validates an already-canonical string. Use [`normalize`] for raw input.
    pub fn parse(value: &str, min_len: usize) -> Result<Self> {
        let ok = value.len() >= min_len.max(1) && value.bytes().all(is_retained_lower);
        if ok {
            Ok(Self(value.to_owned()))
        } else {
            Err(Error::InvalidHashtag(value.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl TryFrom<String> for NormalizedHashtag {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Self::parse(&value, 1)
    }
}

impl From<NormalizedHashtag> for String {
    fn from(tag: NormalizedHashtag) -> String {
        tag.0
    }
}

impl AsRef<str> for NormalizedHashtag {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for NormalizedHashtag {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NormalizedHashtag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_retained_lower(b: u8) -> bool {
    b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_'
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Returns every `#` followed by one or more word characters, in order of appearance.
///
/// In a run of `#` characters only the last one starts the tag, so `##double`
/// yields `#double`.
pub fn extract_raw_hashtags(text: &str) -> Vec<RawTag> {
    let mut tags = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        if c != '#' {
            continue;
        }
        let mut end = start + 1;
        while let Some(&(i, next)) = chars.peek() {
            if !is_word_char(next) {
                break;
            }
            end = i + next.len_utf8();
            chars.next();
        }
        if end > start + 1 {
            tags.push(RawTag(text[start..end].to_owned()));
        }
    }
    tags
}

/// Canonicalizes one raw tag, or returns `None` if it is rejected.
pub fn normalize(raw: &RawTag, min_len: usize) -> Option<NormalizedHashtag> {
    normalize_str(raw.as_str(), min_len)
}

/// [`normalize`] over a plain string.
pub fn normalize_str(raw: &str, min_len: usize) -> Option<NormalizedHashtag> {
    let value: String = raw
        .trim_start_matches('#')
        .to_lowercase()
        .chars()
        .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
        .collect();
    (value.len() >= min_len.max(1)).then_some(NormalizedHashtag(value))
}

/// One stream element: a timestamp plus its distinct canonical hashtags.
///
/// Constructed only through [`prepare_post`] or [`PostRecord::from_normalized`],
/// both of which drop duplicates and the query tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostRecord {
    timestamp: DateTime<Utc>,
    hashtags: Vec<NormalizedHashtag>,
}

impl PostRecord {
    /// Builds a record from canonical tags, dropping duplicates (first occurrence wins)
    /// and any tag equal to `query_tag`.
    pub fn from_normalized<I>(
        timestamp: DateTime<Utc>,
        tags: I,
        query_tag: Option<&NormalizedHashtag>,
    ) -> Self
    where
        I: IntoIterator<Item = NormalizedHashtag>,
    {
        let mut seen = HashSet::new();
        let hashtags = tags
            .into_iter()
            .filter(|t| Some(t) != query_tag)
            .filter(|t| seen.insert(t.clone()))
            .collect();
        Self {
            timestamp,
            hashtags,
        }
    }

    pub fn timestamp(&self) -> DateTime<Utc> {
        self.timestamp
    }

    pub fn hashtags(&self) -> &[NormalizedHashtag] {
        &self.hashtags
    }

    pub fn len(&self) -> usize {
        self.hashtags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hashtags.is_empty()
    }
}

/// Normalizes every raw tag, drops rejects and the query tag, and deduplicates.
pub fn prepare_post<'a, I>(
    timestamp: DateTime<Utc>,
    raw_tags: I,
    query_tag: Option<&NormalizedHashtag>,
    min_len: usize,
) -> PostRecord
where
    I: IntoIterator<Item = &'a RawTag>,
{
    let tags = raw_tags
        .into_iter()
        .filter_map(|raw| normalize(raw, min_len));
    PostRecord::from_normalized(timestamp, tags, query_tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw(s: &str) -> RawTag {
        RawTag::new(s).unwrap()
    }

    fn texts(tags: &[RawTag]) -> Vec<&str> {
        tags.iter().map(RawTag::as_str).collect()
    }

    #[test]
    fn extracts_in_order() {
        assert_eq!(
            texts(&extract_raw_hashtags("Go #Vote! see #2024now")),
            ["#Vote", "#2024now"]
        );
        assert!(extract_raw_hashtags("no tags here").is_empty());
        assert!(extract_raw_hashtags("# lone hash #").is_empty());
    }

    #[test]
    fn hash_run_keeps_last() {
        assert_eq!(texts(&extract_raw_hashtags("##double")), ["#double"]);
        assert_eq!(texts(&extract_raw_hashtags("#a#b")), ["#a", "#b"]);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&raw("#MyBody!"), 3).unwrap().as_str(), "mybody");
        assert_eq!(normalize(&raw("#AB"), 3), None);
        assert_eq!(
            normalize(&raw("#Vote2024"), 3).unwrap().as_str(),
            "vote2024"
        );
        assert_eq!(
            normalize(&raw("#abort;o\nlegal"), 3).unwrap().as_str(),
            "abortolegal"
        );
        assert_eq!(normalize(&raw("#café"), 3).unwrap().as_str(), "caf");
        assert_eq!(normalize(&raw("#AB"), 2).unwrap().as_str(), "ab");
    }

    #[test]
    fn prepare_excludes_query_and_dupes() {
        let query = NormalizedHashtag::parse("mybodymychoice", 3).unwrap();
        let ts = DateTime::<Utc>::UNIX_EPOCH;
        let tags = [raw("#MyBodyMyChoice"), raw("#ProChoice"), raw("#prochoice")];
        let post = prepare_post(ts, &tags, Some(&query), 3);
        let got: Vec<_> = post.hashtags().iter().map(|t| t.as_str()).collect();
        assert_eq!(got, ["prochoice"]);

        assert!(prepare_post(ts, &[], Some(&query), 3).is_empty());
        assert!(prepare_post(ts, &[raw("#ab"), raw("#;;;")], Some(&query), 3).is_empty());
    }

    #[test]
    fn rejects_bad_canonical_forms() {
        assert!(NormalizedHashtag::parse("Upper", 3).is_err());
        assert!(NormalizedHashtag::parse("ab", 3).is_err());
        assert!(NormalizedHashtag::parse("with space", 3).is_err());
        assert!(NormalizedHashtag::parse("ok_tag9", 3).is_ok());
        assert!(RawTag::new("").is_err());
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(s in "\\PC{1,20}") {
            if let Some(once) = normalize_str(&s, 3) {
                let twice = normalize_str(once.as_str(), 3).unwrap();
                prop_assert_eq!(once, twice);
            }
        }

        #[test]
        fn prepared_posts_are_clean(
            tags in proptest::collection::vec("#?[a-zA-Z0-9_!;é ]{0,8}", 0..12),
            min_len in 1usize..5,
        ) {
            let query = NormalizedHashtag::parse("abc", 1).unwrap();
            let raws: Vec<RawTag> = tags.iter().filter(|t| !t.is_empty()).map(|t| raw(t)).collect();
            let post = prepare_post(DateTime::<Utc>::UNIX_EPOCH, &raws, Some(&query), min_len);
            let mut seen = HashSet::new();
            for tag in post.hashtags() {
                prop_assert!(tag != &query);
                prop_assert!(seen.insert(tag.clone()));
                prop_assert!(tag.as_str().len() >= min_len);
                prop_assert!(tag.as_str().bytes().all(is_retained_lower));
            }
        }

        #[test]
        fn extraction_bounded_by_hash_count(s in "[#a-z!_ ]{0,40}") {
            let hashes = s.matches('#').count();
            prop_assert!(extract_raw_hashtags(&s).len() <= hashes);
        }
    }
}
