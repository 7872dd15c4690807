ARRIVALS = "draw_arrivals"
CHANNEL = "realize_channel"
AUXILIARY = "select_auxiliaries"
LEARNING = "learn_interference"
MATCHING = "match_users"
BASELINE = "schedule_baseline"
POWER_CONTROL = "control_power"
SERVE = "serve_queues"
VIRTUAL_QUEUES = "update_virtual_queues"
RECORD = "record_metrics"
