use crate::token::TransformationTag;

/// Boolean test on the token at `offset` from the current one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Predicate {
    IsToken { symbol: String, offset: i32 },
    Is { feature: String, offset: i32 },
    TransformationApplied { tag: TransformationTag, offset: i32 },
    Not(Box<Predicate>),
}

impl Predicate {
    pub fn is_token(symbol: impl Into<String>, offset: i32) -> Self {
        Predicate::IsToken { symbol: symbol.into(), offset }
    }

    pub fn is(feature: impl Into<String>, offset: i32) -> Self {
        Predicate::Is { feature: feature.into(), offset }
    }

    pub fn applied(tag: TransformationTag, offset: i32) -> Self {
        Predicate::TransformationApplied { tag, offset }
    }

    pub fn negate(self) -> Self {
        match self {
            Predicate::Not(inner) => *inner,
            p => Predicate::Not(Box::new(p)),
        }
    }

    pub fn offset(&self) -> i32 {
        match self {
            Predicate::IsToken { offset, .. }
            | Predicate::Is { offset, .. }
            | Predicate::TransformationApplied { offset, .. } => *offset,
            Predicate::Not(inner) => inner.offset(),
        }
    }

    pub fn uses_features(&self) -> bool {
        match self {
            Predicate::Is { .. } => true,
            Predicate::Not(inner) => inner.uses_features(),
            _ => false,
        }
    }

    pub fn op_name(&self) -> &'static str {
        match self {
            Predicate::IsToken { .. } => "IsToken",
            Predicate::Is { .. } => "Is",
            Predicate::TransformationApplied { .. } => "TransformationApplied",
            Predicate::Not(_) => "Not",
        }
    }
}

/// What a rule does to the token it fires on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Transformation {
    ReplaceBy { from: String, to: String },
    ReplaceAnyBy { to: String },
    Insert(Vec<String>),
    Delete,
    CopyReplace(i32),
    CopyInsert(i32),
    Identity,
}

impl Transformation {
    pub fn op_name(&self) -> &'static str {
        match self {
            Transformation::ReplaceBy { .. } => "ReplaceBy",
            Transformation::ReplaceAnyBy { .. } => "ReplaceAnyBy",
            Transformation::Insert(_) => "Insert",
            Transformation::Delete => "Delete",
            Transformation::CopyReplace(_) => "CopyReplace",
            Transformation::CopyInsert(_) => "CopyInsert",
            Transformation::Identity => "Identity",
        }
    }
}

/// A conjunction of guards followed by an action; `IfThen(g1, IfThen(g2, action))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub guards: Vec<Predicate>,
    pub action: Transformation,
}

impl Rule {
    pub fn new(guards: Vec<Predicate>, action: Transformation) -> Self {
        Rule { guards, action }
    }

    pub fn always(action: Transformation) -> Self {
        Rule { guards: Vec::new(), action }
    }

    pub fn uses_features(&self) -> bool {
        self.guards.iter().any(Predicate::uses_features)
    }
}

/// Ordered disjunction of rules; the first rule that applies wins.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct RuleList {
    pub rules: Vec<Rule>,
}

impl RuleList {
    pub fn new(rules: Vec<Rule>) -> Self {
        RuleList { rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Rule lists applied one pass after another.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub passes: Vec<RuleList>,
}

impl Program {
    pub fn new(passes: Vec<RuleList>) -> Self {
        Program { passes }
    }

    pub fn rule_count(&self) -> usize {
        self.passes.iter().map(RuleList::len).sum()
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.passes.iter().flat_map(|p| p.rules.iter())
    }
}
