from django.contrib import admin

from .models import ConstructionRun

admin.site.register(ConstructionRun)
