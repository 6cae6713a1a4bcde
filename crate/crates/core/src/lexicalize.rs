//! Relation-specific sentence templates.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::edge::Edge;
use crate::error::{Error, Result};

pub const HEAD: &str = "{head}";
pub const TAIL: &str = "{tail}";
pub const FALLBACK_TEMPLATE: &str = "{head} {relation_label} {tail}";
pub const TEMPLATE_HEADER: &str = "relation\ttemplate";

/// Relation -> template with one `{head}` and one `{tail}` placeholder.
///
/// Relations without a template use [`FALLBACK_TEMPLATE`], where
/// `{relation_label}` is the edge's relation label (or its relation id when the
/// label is empty).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemplateTable {
    templates: BTreeMap<String, String>,
}

fn check_template(template: &str) -> std::result::Result<(), String> {
    for p in [HEAD, TAIL] {
        let n = template.matches(p).count();
        if n != 1 {
            return Err(format!(
                "template {template:?} must contain {p} exactly once (found {n})"
            ));
        }
    }
    Ok(())
}

impl TemplateTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, relation: impl Into<String>, template: impl Into<String>) -> Result<()> {
        let template = template.into();
        check_template(&template).map_err(Error::InvalidArgument)?;
        self.templates.insert(relation.into(), template);
        Ok(())
    }

    pub fn get(&self, relation: &str) -> Option<&str> {
        self.templates.get(relation).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.templates.iter().map(|(r, t)| (r.as_str(), t.as_str()))
    }

    /// Entries of `other` replace entries of `self`.
    pub fn overlay(mut self, other: &TemplateTable) -> Self {
        for (r, t) in &other.templates {
            self.templates.insert(r.clone(), t.clone());
        }
        self
    }

    /// Reads `relation\ttemplate` rows; the header line is optional.
    pub fn read(reader: impl Read) -> Result<Self> {
        let mut table = TemplateTable::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() || (i == 0 && line == TEMPLATE_HEADER) {
                continue;
            }
            let (relation, template) = line
                .split_once('\t')
                .ok_or_else(|| Error::malformed(i + 1, "expected relation<TAB>template"))?;
            if relation.is_empty() || template.contains('\t') {
                return Err(Error::malformed(i + 1, "expected relation<TAB>template"));
            }
            check_template(template).map_err(|m| Error::malformed(i + 1, m))?;
            table.templates.insert(relation.to_owned(), template.to_owned());
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::file(path, e))?;
        Self::read(file)
    }

    /// Template for `edge`, with the fallback's relation label already filled in.
    pub fn template_for(&self, edge: &Edge) -> String {
        match self.get(&edge.relation) {
            Some(t) => t.to_owned(),
            None => {
                let label = match edge.relation_label.trim() {
                    "" => edge.relation.as_str(),
                    l => l,
                };
                FALLBACK_TEMPLATE.replace("{relation_label}", label)
            }
        }
    }
}

/// Head and tail display labels: first label, trimmed, case preserved.
pub fn node_labels(edge: &Edge) -> Result<(&str, &str)> {
    let (head, tail) = (edge.head_label(), edge.tail_label());
    for (which, label) in [("head", head), ("tail", tail)] {
        if label.is_empty() {
            return Err(Error::Edge {
                id: edge.id.clone(),
                message: format!("empty {which} label"),
            });
        }
    }
    Ok((head, tail))
}

pub fn lexicalize_edge(edge: &Edge, templates: &TemplateTable) -> Result<String> {
    let (head, tail) = node_labels(edge)?;
    Ok(fill(&templates.template_for(edge), head, tail))
}

/// Substitutes both placeholders in one pass so label text is never re-scanned.
pub(crate) fn fill(template: &str, head: &str, tail: &str) -> String {
    let mut out = String::with_capacity(template.len() + head.len() + tail.len());
    let mut rest = template;
    while let Some(pos) = rest.find('{') {
        out.push_str(&rest[..pos]);
        let tail_part = &rest[pos..];
        if let Some(r) = tail_part.strip_prefix(HEAD) {
            out.push_str(head);
            rest = r;
        } else if let Some(r) = tail_part.strip_prefix(TAIL) {
            out.push_str(tail);
            rest = r;
        } else {
            out.push('{');
            rest = &tail_part[1..];
        }
    }
    out.push_str(rest);
    out
}

const DEFAULT_TEMPLATES: &[(&str, &str)] = &[
    // ConceptNet
    ("/r/FormOf", "{head} is a form of {tail}"),
    ("/r/DerivedFrom", "{head} is derived from {tail}"),
    ("/r/EtymologicallyDerivedFrom", "{head} is etymologically derived from {tail}"),
    ("/r/Synonym", "{head} is a synonym of {tail}"),
    ("/r/SimilarTo", "{head} is similar to {tail}"),
    ("/r/DefinedAs", "{head} is defined as {tail}"),
    ("/r/Antonym", "{head} is the opposite of {tail}"),
    ("/r/DistinctFrom", "{head} is distinct from {tail}"),
    ("/r/IsA", "{head} is a type of {tail}"),
    ("/r/InstanceOf", "{head} is an instance of {tail}"),
    ("/r/MannerOf", "{head} is a manner of {tail}"),
    ("/r/PartOf", "{head} is part of {tail}"),
    ("/r/HasA", "{head} has {tail}"),
    ("/r/MadeOf", "{head} is made of {tail}"),
    ("/r/AtLocation", "{head} is located at {tail}"),
    ("/r/LocatedNear", "{head} is located near {tail}"),
    ("/r/CreatedBy", "{head} is created by {tail}"),
    ("/r/ReceivesAction", "{head} can be {tail}"),
    ("/r/UsedFor", "{head} is used for {tail}"),
    ("/r/CapableOf", "{head} is capable of {tail}"),
    ("/r/NotCapableOf", "{head} is not capable of {tail}"),
    ("/r/CausesDesire", "{head} causes the desire to {tail}"),
    ("/r/MotivatedByGoal", "{head} is motivated by {tail}"),
    ("/r/Desires", "{head} desires {tail}"),
    ("/r/NotDesires", "{head} does not desire {tail}"),
    ("/r/ObstructedBy", "{head} is obstructed by {tail}"),
    ("/r/HasProperty", "{head} has the property {tail}"),
    ("/r/NotHasProperty", "{head} does not have the property {tail}"),
    ("/r/SymbolOf", "{head} is a symbol of {tail}"),
    ("/r/HasFirstSubevent", "{head} starts with {tail}"),
    ("/r/HasLastSubevent", "{head} ends with {tail}"),
    ("/r/HasSubevent", "{head} includes the event {tail}"),
    ("/r/HasPrerequisite", "{head} requires {tail}"),
    ("/r/Causes", "{head} causes {tail}"),
    ("/r/Entails", "{head} entails {tail}"),
    ("/r/RelatedTo", "{head} is related to {tail}"),
    ("/r/HasContext", "{head} is used in the context of {tail}"),
    ("/r/EtymologicallyRelatedTo", "{head} is etymologically related to {tail}"),
    // ATOMIC: the head is an event phrase such as "PersonX bakes bread".
    ("at:xIntent", "{head}. Because PersonX wanted {tail}"),
    ("at:xWant", "{head}. As a result, PersonX wants {tail}"),
    ("at:oWant", "{head}. As a result, others want {tail}"),
    ("at:xAttr", "{head}. PersonX is seen as {tail}"),
    ("at:xNeed", "{head}. Before, PersonX needed {tail}"),
    ("at:xEffect", "{head}. As a result, {tail}"),
    ("at:oEffect", "{head}. As a result, others {tail}"),
    ("at:xReact", "{head}. As a result, PersonX feels {tail}"),
    ("at:oReact", "{head}. As a result, others feel {tail}"),
    // WordNet
    ("lemma", "{head} has the lemma {tail}"),
    ("synonym", "{head} is a synonym of {tail}"),
    ("antonym", "{head} is the opposite of {tail}"),
    ("hypernym", "{head} is a type of {tail}"),
    ("meronym", "{head} has part {tail}"),
    ("holonym", "{head} is part of {tail}"),
    // Roget
    ("Synonym", "{head} is a synonym of {tail}"),
    ("Antonym", "{head} is the opposite of {tail}"),
    // FrameNet
    ("lexical_unit", "{head} is evoked by the word {tail}"),
    ("reframing_mapping", "{head} can be reframed as {tail}"),
    ("metaphor", "{head} is a metaphor for {tail}"),
    ("excludes", "{head} excludes {tail}"),
    ("perspective_on", "{head} is a perspective on {tail}"),
    ("inheritance", "{head} inherits from {tail}"),
    ("using", "{head} uses {tail}"),
    ("frame_element", "{head} has the element {tail}"),
    ("subframe", "{head} is a subframe of {tail}"),
    ("precedes", "{head} precedes {tail}"),
    ("inchoative_of", "{head} is the beginning of {tail}"),
    ("causative_of", "{head} causes {tail}"),
    ("see_also", "{head} is related to {tail}"),
    ("requires", "{head} requires {tail}"),
    // Wikidata-CS
    ("label", "{head} is called {tail}"),
    ("P460", "{head} is said to be the same as {tail}"),
    ("P1889", "{head} is different from {tail}"),
    ("P461", "{head} is the opposite of {tail}"),
    ("P279", "{head} is a subclass of {tail}"),
    ("P31", "{head} is an instance of {tail}"),
    ("description", "{head} is described as {tail}"),
    ("P527", "{head} has part {tail}"),
    ("P463", "{head} is a member of {tail}"),
    ("P186", "{head} is made from {tail}"),
    ("P276", "{head} is located at {tail}"),
    ("P927", "{head} is anatomically located at {tail}"),
    ("P170", "{head} is created by {tail}"),
    ("P1535", "{head} is used by {tail}"),
    ("P366", "{head} is used for {tail}"),
    ("P2283", "{head} uses {tail}"),
    ("P462", "{head} has the color {tail}"),
    ("P1552", "{head} has the quality {tail}"),
    ("P828", "{head} is caused by {tail}"),
    ("P1542", "{head} has the effect {tail}"),
    ("P425", "{head} is the field of {tail}"),
    ("P180", "{head} depicts {tail}"),
    ("P1995", "{head} is treated by the specialty {tail}"),
];

/// Templates for every relation of the default mapping.
pub fn default_templates() -> TemplateTable {
    let mut table = TemplateTable::new();
    for (r, t) in DEFAULT_TEMPLATES {
        table.insert(*r, *t).expect("default templates are well formed");
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::default_mapping;

    #[test]
    fn table_examples() {
        let t = default_templates();
        let pantry = Edge::simple("e1", "food", "/r/AtLocation", "pantry", "CN");
        assert_eq!(lexicalize_edge(&pantry, &t).unwrap(), "food is located at pantry");

        let rotten = Edge::simple("e2", "food", "/r/CapableOf", "go rotten", "CN");
        assert_eq!(lexicalize_edge(&rotten, &t).unwrap(), "food is capable of go rotten");

        let mut unknown = Edge::simple("e3", "food", "/r/Whatever", "pantry", "CN");
        unknown.relation_label = "some-rel-label".into();
        assert_eq!(lexicalize_edge(&unknown, &t).unwrap(), "food some-rel-label pantry");
    }

    #[test]
    fn first_label_trimmed_case_preserved() {
        let mut e = Edge::simple("e1", "x", "/r/IsA", "y", "CN");
        e.node1_label = " Comfort Food |comfort food".into();
        e.node2_label = "Food".into();
        assert_eq!(
            lexicalize_edge(&e, &default_templates()).unwrap(),
            "Comfort Food is a type of Food"
        );
    }

    #[test]
    fn labels_containing_braces_are_literal() {
        let e = Edge::simple("e1", "{tail}", "/r/IsA", "{head}", "CN");
        assert_eq!(
            lexicalize_edge(&e, &default_templates()).unwrap(),
            "{tail} is a type of {head}"
        );
    }

    #[test]
    fn empty_label_names_the_edge() {
        let mut e = Edge::simple("edge-42", "food", "/r/IsA", "x", "CN");
        e.node2_label = " | ".into();
        let err = lexicalize_edge(&e, &default_templates()).unwrap_err();
        assert!(err.to_string().contains("edge-42"));
    }

    #[test]
    fn every_default_relation_has_a_template() {
        let t = default_templates();
        for entry in default_mapping().entries() {
            assert!(t.get(&entry.relation).is_some(), "{}", entry.relation);
        }
    }

    #[test]
    fn template_file_parsing_and_override() {
        let file = "relation\ttemplate\n/r/IsA\t{head} is a kind of {tail}\n";
        let user = TemplateTable::read(file.as_bytes()).unwrap();
        assert_eq!(user.len(), 1);
        let merged = default_templates().overlay(&user);
        let e = Edge::simple("e", "tea", "/r/IsA", "drink", "CN");
        assert_eq!(lexicalize_edge(&e, &merged).unwrap(), "tea is a kind of drink");

        let bad = "/r/IsA\t{head} is {head}\n";
        assert!(TemplateTable::read(bad.as_bytes()).is_err());
        assert!(TemplateTable::new().insert("r", "no placeholders").is_err());
    }
}
