use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::BridgeMessage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SessionId(pub u64);

impl std::fmt::Display for SessionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Topic to subscriber sets.
#[derive(Debug, Clone, Default)]
pub struct SubscriptionTable {
    by_topic: BTreeMap<String, BTreeSet<SessionId>>,
}

impl SubscriptionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false when the session was already subscribed.
    pub fn subscribe(&mut self, session: SessionId, topic: &str) -> bool {
        self.by_topic.entry(topic.to_string()).or_default().insert(session)
    }

    pub fn unsubscribe(&mut self, session: SessionId, topic: &str) -> bool {
        let Some(set) = self.by_topic.get_mut(topic) else {
            return false;
        };
        let removed = set.remove(&session);
        if set.is_empty() {
            self.by_topic.remove(topic);
        }
        removed
    }

    pub fn remove_session(&mut self, session: SessionId) {
        self.by_topic.retain(|_, set| {
            set.remove(&session);
            !set.is_empty()
        });
    }

    pub fn is_subscribed(&self, session: SessionId, topic: &str) -> bool {
        self.by_topic.get(topic).is_some_and(|s| s.contains(&session))
    }

    pub fn subscribers(&self, topic: &str) -> Vec<SessionId> {
        self.by_topic
            .get(topic)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default()
    }

    pub fn topics(&self) -> impl Iterator<Item = &str> {
        self.by_topic.keys().map(String::as_str)
    }
}

/// Sessions that should receive `message`, in ascending id order.
pub fn route(table: &SubscriptionTable, message: &BridgeMessage) -> Vec<SessionId> {
    match message.op {
        super::Op::Publish => table.subscribers(&message.topic),
        _ => Vec::new(),
    }
}
