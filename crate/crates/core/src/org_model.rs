//! Organizational background knowledge: (identity, relation type, group)
//! triples.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::event_log::{EventLog, ResourceId};

/// Relation type used by every role-based template.
pub const ROLE: &str = "role";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub identity: String,
    pub relation_type: String,
    pub group: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrgModel {
    relations: BTreeSet<Relation>,
}

impl OrgModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, identity: &str, relation_type: &str, group: &str) -> bool {
        self.relations.insert(Relation {
            identity: identity.to_string(),
            relation_type: relation_type.to_string(),
            group: group.to_string(),
        })
    }

    pub fn relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn has_role(&self, identity: &str, relation_type: &str, group: &str) -> bool {
        self.relations
            .iter()
            .any(|r| r.identity == identity && r.relation_type == relation_type && r.group == group)
    }

    /// Distinct groups among relations of `relation_type`.
    pub fn groups(&self, relation_type: &str) -> BTreeSet<&str> {
        self.relations
            .iter()
            .filter(|r| r.relation_type == relation_type)
            .map(|r| r.group.as_str())
            .collect()
    }

    /// Reads `resource,relation_type,group` rows. A completely empty input is
    /// an empty model.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<OrgModel> {
        let mut rdr = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        let mut model = OrgModel::new();
        if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
            return Ok(model);
        }
        let find = |name: &str| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::parse(1, format!("missing column {name:?} in header")))
        };
        let cols = [find("resource")?, find("relation_type")?, find("group")?];
        let mut record = csv::StringRecord::new();
        while rdr.read_record(&mut record)? {
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != header.len() {
                return Err(Error::parse(
                    line,
                    format!("expected {} fields, found {}", header.len(), record.len()),
                ));
            }
            let [identity, relation_type, group] = cols.map(|c| &record[c]);
            if identity.is_empty() || relation_type.is_empty() || group.is_empty() {
                return Err(Error::parse(line, "empty field in relation row"));
            }
            model.insert(identity, relation_type, group);
        }
        Ok(model)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["resource", "relation_type", "group"])?;
        for r in &self.relations {
            w.write_record([&r.identity, &r.relation_type, &r.group])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn parse_relations(source: &[u8]) -> Result<OrgModel> {
    OrgModel::from_csv_reader(source)
}

pub fn has_role(model: &OrgModel, identity: &str, relation_type: &str, group: &str) -> bool {
    model.has_role(identity, relation_type, group)
}

/// Index into [`RoleTable::groups`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupId(pub u32);

/// Role memberships resolved against a log's interned resources.
///
/// Groups are every `role` group of the org model, sorted; an identity may
/// belong to several.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoleTable {
    groups: Vec<String>,
    members: Vec<Vec<GroupId>>,
}

impl RoleTable {
    pub fn new(org: &OrgModel, log: &EventLog) -> Self {
        let groups: Vec<String> = org.groups(ROLE).into_iter().map(str::to_string).collect();
        let group_ids: BTreeMap<&str, GroupId> = groups
            .iter()
            .enumerate()
            .map(|(i, g)| (g.as_str(), GroupId(i as u32)))
            .collect();
        let mut members = vec![Vec::new(); log.identities().len()];
        for r in org.relations().filter(|r| r.relation_type == ROLE) {
            if let Some(res) = log.resource_id(&r.identity) {
                members[res.0 as usize].push(group_ids[r.group.as_str()]);
            }
        }
        for m in &mut members {
            m.sort_unstable();
        }
        RoleTable { groups, members }
    }

    pub fn groups(&self) -> &[String] {
        &self.groups
    }

    pub fn group_ids(&self) -> impl Iterator<Item = GroupId> {
        (0..self.groups.len() as u32).map(GroupId)
    }

    pub fn group_name(&self, id: GroupId) -> &str {
        &self.groups[id.0 as usize]
    }

    pub fn group_id(&self, name: &str) -> Option<GroupId> {
        self.groups
            .binary_search_by(|g| g.as_str().cmp(name))
            .ok()
            .map(|i| GroupId(i as u32))
    }

    pub fn has_role(&self, resource: ResourceId, group: GroupId) -> bool {
        self.members
            .get(resource.0 as usize)
            .is_some_and(|m| m.binary_search(&group).is_ok())
    }
}
