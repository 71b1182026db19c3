//! Family files: a JSON array whose members are caps
//! (`{"generators": ...}`), short sets (`{"parts": ...}`) or arc unions on
//! the circle (`{"arcs": [[start_deg, end_deg], ...]}`).

use serde_json::Value;
use spherecover::oracle::{cap_to_arc, shortset_to_arcset, ArcSet, ArcSetJson};
use spherecover::{Cap, ShortSet};

use crate::error::CliError;

#[derive(Clone, Debug)]
pub enum Member {
    Cap(Cap<f64>),
    Short(ShortSet<f64>),
    Arcs(ArcSet<f64>),
}

impl Member {
    fn ambient_dim(&self) -> usize {
        match self {
            Member::Cap(c) => c.ambient_dim(),
            Member::Short(s) => s.ambient_dim(),
            Member::Arcs(_) => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub members: Vec<Member>,
    /// `n` for a family on `S^n`.
    pub dim: usize,
}

impl Family {
    pub fn from_value(v: &Value) -> Result<Self, CliError> {
        let items = v.as_array().ok_or_else(|| CliError::input("a family file must be a JSON array"))?;
        if items.is_empty() {
            return Err(CliError::input("empty family"));
        }
        let members = items.iter().enumerate().map(|(i, item)| parse_member(item).map_err(|e| e.context(&format!("member {i}")))).collect::<Result<Vec<_>, _>>()?;
        let ambient = members[0].ambient_dim();
        if let Some(bad) = members.iter().position(|m| m.ambient_dim() != ambient) {
            return Err(CliError::input(format!(
                "member {bad} lives in R^{}, member 0 in R^{ambient}",
                members[bad].ambient_dim()
            )));
        }
        Ok(Family { members, dim: ambient - 1 })
    }

    /// The members as caps, or `None` if some member has several parts.
    pub fn caps(&self) -> Result<Option<Vec<Cap<f64>>>, CliError> {
        let mut out = Vec::with_capacity(self.members.len());
        for m in &self.members {
            match m {
                Member::Cap(c) => out.push(c.clone()),
                Member::Short(s) if s.parts().len() == 1 => out.push(s.parts()[0].clone()),
                Member::Arcs(a) if a.arcs().len() == 1 => out.push(a.arcs()[0].to_cap()?),
                _ => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    pub fn short_sets(&self) -> Result<Vec<ShortSet<f64>>, CliError> {
        self.members
            .iter()
            .map(|m| match m {
                Member::Cap(c) => Ok(ShortSet::single(c.clone())),
                Member::Short(s) => Ok(s.clone()),
                Member::Arcs(a) => Ok(ShortSet::new(a.arcs().iter().map(|arc| arc.to_cap()).collect::<Result<_, _>>()?)?),
            })
            .collect()
    }

    /// Members as arc unions in degrees; only for families on `S^1`.
    pub fn arc_sets(&self) -> Result<Vec<ArcSet<f64>>, CliError> {
        self.members
            .iter()
            .map(|m| match m {
                Member::Cap(c) => Ok(ArcSet::single(cap_to_arc(c)?)),
                Member::Short(s) => Ok(shortset_to_arcset(s)?),
                Member::Arcs(a) => Ok(a.clone()),
            })
            .collect()
    }
}

fn parse_member(item: &Value) -> Result<Member, CliError> {
    let obj = item.as_object().ok_or_else(|| CliError::input("expected an object"))?;
    let parsed = if obj.contains_key("generators") {
        serde_json::from_value(item.clone()).map(Member::Cap)
    } else if obj.contains_key("parts") {
        serde_json::from_value(item.clone()).map(Member::Short)
    } else if obj.contains_key("arcs") {
        let json: ArcSetJson = serde_json::from_value(item.clone()).map_err(CliError::json)?;
        return Ok(Member::Arcs(ArcSet::try_from(json)?));
    } else {
        return Err(CliError::input("expected a \"generators\", \"parts\" or \"arcs\" key"));
    };
    parsed.map_err(CliError::json)
}
