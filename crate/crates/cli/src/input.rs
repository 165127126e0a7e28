//! The JSON input document and its validation.

use serde::{Deserialize, Serialize};

use orbicurve_core::bundles::{BundleData, ChainBundle, EqLineBundle, SplitBundle};
use orbicurve_core::novikov::InvariantTable;
use orbicurve_core::twisted_curve::{CurveChain, TwistedComponent};
use orbicurve_core::wps::WPSModel;
use orbicurve_core::Rational;

use crate::CliError;

/// One input document. Each command reads the fields it needs.
///
/// Components are accepted as `{"c":…,"d":…}` or `{"a":…,"b":…,"l1":…,"l2":…}`
/// and written back in the second form. `bundle` lists the summands of a
/// split bundle, each as one `{"k1","k2","d"}` per chain component.
#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<TwistedComponent>>,
    /// Degree tags of the chain components; all 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<Vec<Vec<BundleData>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wps: Option<WPSModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<InvariantTable>,
}

/// Escapes one reference token of a JSON pointer.
fn pointer_token(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

fn to_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", pointer_token(key))),
            Segment::Enum { .. } | Segment::Unknown => {}
        }
    }
    out
}

fn invalid(pointer: impl Into<String>, e: impl std::fmt::Display) -> CliError {
    CliError::Input { pointer: Some(pointer.into()), message: e.to_string() }
}

impl Document {
    /// Parses and schema-checks a document. Errors carry the JSON pointer of
    /// the offending value.
    pub fn parse(text: &str) -> Result<Document, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = to_pointer(e.path());
            invalid(pointer, e.into_inner())
        })?;
        doc.validate()?;
        Ok(doc)
    }

    /// Invariants that need more than one field.
    fn validate(&self) -> Result<(), CliError> {
        if let Some(m) = &self.wps {
            m.clone().validated().map_err(|e| invalid("/wps", e))?;
        }
        if self.bundle.is_some() && self.chain.is_none() {
            return Err(invalid("/bundle", "a bundle needs a chain"));
        }
        if self.degrees.is_some() && self.chain.is_none() {
            return Err(invalid("/degrees", "degree tags need a chain"));
        }
        if self.chain.is_some() {
            self.chain()?;
        }
        if self.bundle.is_some() {
            self.split_bundle()?;
        }
        if let Some(t) = &self.table {
            let m = self.wps.as_ref().ok_or_else(|| invalid("/table", "an invariant table needs a wps model"))?;
            t.check_against(&m.reduced_basis()).map_err(|e| invalid("/table", e))?;
        }
        Ok(())
    }

    /// Canonical JSON form, with components written out explicitly.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn chain(&self) -> Result<CurveChain, CliError> {
        let comps = self.chain.clone().ok_or_else(|| invalid("", "missing field `chain`"))?;
        match &self.degrees {
            Some(tags) => CurveChain::new(comps, tags.clone()).map_err(|e| invalid("/degrees", e)),
            None => CurveChain::with_unit_degrees(comps).map_err(|e| invalid("/chain", e)),
        }
    }

    pub fn split_bundle(&self) -> Result<SplitBundle, CliError> {
        let chain = self.chain()?;
        let summands = self.bundle.as_ref().ok_or_else(|| invalid("", "missing field `bundle`"))?;
        let mut out = Vec::with_capacity(summands.len());
        for (i, s) in summands.iter().enumerate() {
            if s.len() != chain.len() {
                return Err(invalid(
                    format!("/bundle/{i}"),
                    format!("summand has {} pieces but the chain has {} components", s.len(), chain.len()),
                ));
            }
            let pieces: Vec<EqLineBundle> =
                s.iter().zip(chain.components()).map(|(d, &c)| EqLineBundle::from_data(c, *d)).collect();
            out.push(ChainBundle::new(chain.clone(), pieces).map_err(|e| invalid(format!("/bundle/{i}"), e))?);
        }
        SplitBundle::new(out).map_err(|e| invalid("/bundle", e))
    }

    pub fn wps(&self) -> Result<WPSModel, CliError> {
        self.wps.clone().ok_or_else(|| invalid("", "missing field `wps`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pointer_of(text: &str) -> (Option<String>, String) {
        match Document::parse(text) {
            Err(CliError::Input { pointer, message }) => (pointer, message),
            other => panic!("expected an input error, got {other:?}"),
        }
    }

    #[test]
    fn accepts_both_component_forms() {
        let doc = Document::parse(r#"{"chain":[{"c":4,"d":6}], "bundle":[[{"k1":0,"k2":0,"d":2}]]}"#).unwrap();
        let c = doc.chain.as_ref().unwrap()[0];
        assert_eq!((c.a(), c.b(), c.l1(), c.l2()), (2, 3, 2, 1));
        let explicit = Document::parse(r#"{"chain":[{"a":2,"b":3,"l1":2,"l2":1}]}"#).unwrap();
        assert_eq!(explicit.chain.unwrap()[0], c);
    }

    #[test]
    fn gcd_failure_names_the_invariant() {
        let (pointer, message) = pointer_of(r#"{"chain":[{"a":2,"b":4,"l1":1,"l2":1}]}"#);
        assert_eq!(pointer.as_deref(), Some("/chain/0"));
        assert!(message.contains("gcd(a,b)=2 ≠ 1"), "{message}");
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let (pointer, _) = pointer_of(r#"{"chain":[{"c":4,"d":6}], "bundle":[[{"k1":0,"k2":"x","d":2}]]}"#);
        assert_eq!(pointer.as_deref(), Some("/bundle/0/0/k2"));
        let (pointer, _) = pointer_of(r#"{"wps":{"weights":[1,0],"bundle":[1]}}"#);
        assert_eq!(pointer.as_deref(), Some("/wps"));
        let (pointer, message) = pointer_of(r#"{"chian":[]}"#);
        assert_eq!(pointer.as_deref(), Some("/chian"));
        assert!(message.contains("chian"));
        assert_eq!(pointer_token("a/b~c"), "a~1b~0c");
    }

    #[test]
    fn unbalanced_bundles_point_at_the_summand() {
        let text = r#"{"chain":[{"c":1,"d":2},{"c":2,"d":1}],
                       "bundle":[[{"k1":0,"k2":0,"d":1},{"k1":0,"k2":0,"d":0}]]}"#;
        let (pointer, message) = pointer_of(text);
        assert_eq!(pointer.as_deref(), Some("/bundle/0"));
        assert!(message.contains("unbalanced"), "{message}");
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let docs = [
            r#"{"chain":[{"c":4,"d":6}], "bundle":[[{"k1":0,"k2":0,"d":2}]]}"#,
            r#"{"wps":{"weights":[1,1,2,2],"bundle":[1]}}"#,
            r#"{"chain":[{"c":1,"d":2},{"c":2,"d":1}], "degrees":["1/2","1"]}"#,
        ];
        for text in docs {
            let once = Document::parse(text).unwrap().to_canonical_json();
            let twice = Document::parse(&once).unwrap().to_canonical_json();
            assert_eq!(once, twice);
        }
    }
}
