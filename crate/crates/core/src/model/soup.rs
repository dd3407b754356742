use std::collections::BTreeMap;
use std::fmt;

use super::object::fmt_objects;
use super::{Label, MembraneName, Multiset, Object, Target, TargetMessage};

/// A multiset of objects, pending target messages and nested membranes.
///
/// Values are always kept canonical: directed messages with the same target
/// are merged, messages and membranes are sorted. Structural equality is
/// therefore equality as nested multisets.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Soup {
    objects: Multiset<Object>,
    messages: Vec<TargetMessage>,
    membranes: Vec<Membrane>,
}

/// A whole system state: the top-level soup, normally a single skin membrane.
pub type Configuration = Soup;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Membrane {
    pub name: MembraneName,
    pub contents: Soup,
}

impl Membrane {
    pub fn new(name: MembraneName, contents: Soup) -> Self {
        Membrane { name, contents }
    }
}

impl Soup {
    pub fn empty() -> Self {
        Soup::default()
    }

    pub fn from_parts(
        objects: Multiset<Object>,
        messages: Vec<TargetMessage>,
        membranes: Vec<Membrane>,
    ) -> Self {
        let mut s = Soup {
            objects,
            messages,
            membranes,
        };
        s.normalize();
        s
    }

    pub fn from_objects(objects: Multiset<Object>) -> Self {
        Soup {
            objects,
            ..Soup::default()
        }
    }

    /// A configuration consisting of a single membrane.
    pub fn single(membrane: Membrane) -> Self {
        Soup {
            membranes: vec![membrane],
            ..Soup::default()
        }
    }

    pub fn objects(&self) -> &Multiset<Object> {
        &self.objects
    }

    pub fn messages(&self) -> &[TargetMessage] {
        &self.messages
    }

    pub fn membranes(&self) -> &[Membrane] {
        &self.membranes
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty() && self.messages.is_empty() && self.membranes.is_empty()
    }

    pub(crate) fn into_parts(self) -> (Multiset<Object>, Vec<TargetMessage>, Vec<Membrane>) {
        (self.objects, self.messages, self.membranes)
    }

    pub fn with_object(mut self, o: Object) -> Self {
        self.objects.insert(o);
        self
    }

    pub fn with_message(mut self, m: TargetMessage) -> Self {
        self.messages.push(m);
        self.normalize();
        self
    }

    pub fn with_membrane(mut self, m: Membrane) -> Self {
        self.membranes.push(m);
        self.membranes.sort();
        self
    }

    /// Local normalization: merges directed messages per target and sorts.
    /// Nested membranes are assumed canonical already.
    fn normalize(&mut self) {
        let mut directed: BTreeMap<Target, Multiset<Object>> = BTreeMap::new();
        let mut divisions = Vec::new();
        for m in self.messages.drain(..) {
            match m {
                TargetMessage::Directed { payload, target } => {
                    directed.entry(target).or_default().add_all(&payload);
                }
                d @ TargetMessage::Division { .. } => divisions.push(d),
            }
        }
        self.messages = directed
            .into_iter()
            .map(|(target, payload)| TargetMessage::Directed { payload, target })
            .chain(divisions)
            .collect();
        self.messages.sort();
        self.membranes.sort();
    }

    /// Total number of objects, including those in message payloads and in
    /// nested membranes. `delta` counts as an object.
    pub fn num_objs_rec(&self) -> usize {
        self.objects.len()
            + self.messages.iter().map(TargetMessage::object_count).sum::<usize>()
            + self
                .membranes
                .iter()
                .map(|m| m.contents.num_objs_rec())
                .sum::<usize>()
    }

    /// Visits every membrane at any depth.
    pub fn for_each_membrane<'a>(&'a self, f: &mut impl FnMut(&'a Membrane)) {
        for m in &self.membranes {
            f(m);
            m.contents.for_each_membrane(f);
        }
    }

    pub fn count_membranes(&self, name: &MembraneName) -> usize {
        let mut n = 0;
        self.for_each_membrane(&mut |m| {
            if &m.name == name {
                n += 1
            }
        });
        n
    }
}

/// Canonical form of a configuration. Soups are canonical by construction,
/// so this only rebuilds the normal form recursively.
pub fn canonicalize(config: &Configuration) -> Configuration {
    fn go(s: &Soup) -> Soup {
        let membranes = s
            .membranes
            .iter()
            .map(|m| Membrane::new(m.name.clone(), go(&m.contents)))
            .collect();
        Soup::from_parts(s.objects.clone(), s.messages.clone(), membranes)
    }
    go(config)
}

/// `sub ⊆ sup` as object multisets.
pub fn soup_contains(sub: &Multiset<Object>, sup: &Multiset<Object>) -> bool {
    sub.is_submultiset_of(sup)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("count of an empty pattern is undefined")]
pub struct EmptyPattern;

/// Largest `k` such that `k` copies of `pattern` are jointly in `contents`.
pub fn count_submultiset(
    contents: &Multiset<Object>,
    pattern: &Multiset<Object>,
) -> Result<usize, EmptyPattern> {
    contents.count_submultiset(pattern).ok_or(EmptyPattern)
}

impl fmt::Display for Soup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            Ok(())
        };
        if !self.objects.is_empty() {
            sep(f)?;
            fmt_objects(f, &self.objects)?;
        }
        for m in &self.messages {
            sep(f)?;
            write!(f, "{m}")?;
        }
        for m in &self.membranes {
            sep(f)?;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Membrane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | {} >", self.name, self.contents)
    }
}

/// Rule labels applied in one evolution step, grouped by membrane name.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AppliedMultiset(BTreeMap<MembraneName, Multiset<Label>>);

impl AppliedMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, membrane: &MembraneName, labels: &Multiset<Label>) {
        if !labels.is_empty() {
            self.0.entry(membrane.clone()).or_default().add_all(labels);
        }
    }

    pub fn merge(&mut self, other: &AppliedMultiset) {
        for (m, l) in &other.0 {
            self.add(m, l);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, membrane: &MembraneName) -> Option<&Multiset<Label>> {
        self.0.get(membrane)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MembraneName, &Multiset<Label>)> {
        self.0.iter()
    }

    pub fn total(&self) -> usize {
        self.0.values().map(Multiset::len).sum()
    }
}

impl fmt::Display for AppliedMultiset {
    /// `r11 r12 r13 in M1, r25 in M2`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, labels)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            for l in labels.iter_expanded() {
                write!(f, "{l} ")?;
            }
            write!(f, "in {m}")?;
        }
        Ok(())
    }
}
